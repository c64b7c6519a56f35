use rand::Rng;

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};

/// Input-ignoring Bernoulli predictor: outputs 1 with probability `p_pos`,
/// the positive-label fraction of whatever it was last fit on.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomClassifier {
    dim: usize,
    p_pos: f64,
}

impl RandomClassifier {
    pub fn new(dim: usize, p_pos: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_pos) {
            return Err(Error::range("p_pos must lie in [0, 1]"));
        }
        Ok(RandomClassifier { dim, p_pos })
    }

    /// Always predicts `label`.
    pub fn constant(dim: usize, label: Label) -> Self {
        RandomClassifier {
            dim,
            p_pos: f64::from(label.min(1)),
        }
    }

    pub fn fit(&self, d: &Dataset) -> Self {
        RandomClassifier {
            dim: self.dim,
            p_pos: d.positive_fraction(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p_pos(&self) -> f64 {
        self.p_pos
    }

    pub fn predict<R: Rng + ?Sized>(&self, rng: &mut R) -> Label {
        Label::from(rng.random_bool(self.p_pos))
    }
}
