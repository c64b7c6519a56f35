#![allow(dead_code)]

pub mod fidelity;
pub mod oracle;
