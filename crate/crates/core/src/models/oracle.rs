use rand::Rng;

use crate::data::Label;
use crate::error::{Error, Result};
use crate::geometry::ManifoldSpec;

/// Teacher that knows the ground-truth labeling rule and flips each answer
/// independently with probability `noise_rate` ≤ 1/3, so its expected
/// accuracy is at least 2/3. `noise_rate = 0` is an exact oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSocrates {
    spec: ManifoldSpec,
    noise_rate: f64,
}

pub const MAX_NOISE_RATE: f64 = 1.0 / 3.0;

impl OracleSocrates {
    pub fn new(spec: ManifoldSpec, noise_rate: f64) -> Result<Self> {
        if !(0.0..=MAX_NOISE_RATE).contains(&noise_rate) {
            return Err(Error::range(format!(
                "noise_rate must lie in [0, 1/3] so that teacher accuracy ≥ 2/3 (got {noise_rate})"
            )));
        }
        Ok(OracleSocrates { spec, noise_rate })
    }

    pub fn exact(spec: ManifoldSpec) -> Self {
        OracleSocrates {
            spec,
            noise_rate: 0.0,
        }
    }

    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn noise_rate(&self) -> f64 {
        self.noise_rate
    }

    pub fn dim(&self) -> usize {
        self.spec.ambient_dim()
    }

    pub fn label<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Label {
        let y = self.spec.label(x);
        if rng.random_bool(self.noise_rate) {
            1 - y
        } else {
            y
        }
    }
}
