//! Concrete classifiers: the idealized random and perfect-memory learners,
//! the oracle teacher, and two trainable models (logistic regression and a
//! one-hidden-layer MLP) sharing the logistic loss.

mod checkpoint;
mod logistic;
mod memory;
mod mlp;
mod oracle;
mod random;

pub use checkpoint::Checkpoint;
pub use logistic::LogisticModel;
pub use memory::BallMemoryClassifier;
pub use mlp::MlpModel;
pub use oracle::{OracleSocrates, MAX_NOISE_RATE};
pub use random::RandomClassifier;

use crate::data::LabeledPoint;

/// A real-valued model trained by gradient descent on the logistic loss.
pub trait GradientModel {
    fn params(&self) -> Vec<f64>;
    fn set_params(&mut self, p: &[f64]);
    fn logit(&self, x: &[f64]) -> f64;
    /// Mean logistic loss over `batch` and its gradient with respect to
    /// [`GradientModel::params`].
    fn loss_grad(&self, batch: &[&LabeledPoint]) -> (f64, Vec<f64>);

    fn loss(&self, batch: &[&LabeledPoint]) -> f64 {
        let total: f64 = batch
            .iter()
            .map(|p| logistic_loss(self.logit(&p.x), f64::from(p.y)))
            .sum();
        total / batch.len() as f64
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// −y ln σ(z) − (1 − y) ln(1 − σ(z)), evaluated without overflow.
pub fn logistic_loss(z: f64, y: f64) -> f64 {
    let softplus = z.max(0.0) + (-z.abs()).exp().ln_1p();
    softplus - y * z
}
