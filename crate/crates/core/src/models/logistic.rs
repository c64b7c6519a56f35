use crate::data::{Label, LabeledPoint};

use super::{logistic_loss, sigmoid, GradientModel};

/// Linear logit `w·x + b` squashed by a sigmoid; label 1 iff score ≥ 0.5.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    weights: Vec<f64>,
    bias: f64,
}

impl LogisticModel {
    /// All-zero weights.
    pub fn new(dim: usize) -> Self {
        LogisticModel {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    pub fn from_weights(weights: Vec<f64>, bias: f64) -> Self {
        LogisticModel { weights, bias }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        Label::from(self.score(x) >= 0.5)
    }
}

impl GradientModel for LogisticModel {
    fn params(&self) -> Vec<f64> {
        let mut p = self.weights.clone();
        p.push(self.bias);
        p
    }

    fn set_params(&mut self, p: &[f64]) {
        let n = self.weights.len();
        self.weights.copy_from_slice(&p[..n]);
        self.bias = p[n];
    }

    fn logit(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }

    fn loss_grad(&self, batch: &[&LabeledPoint]) -> (f64, Vec<f64>) {
        let n = self.weights.len();
        let mut grad = vec![0.0; n + 1];
        let mut loss = 0.0;
        let scale = 1.0 / batch.len() as f64;
        for p in batch {
            let z = self.logit(&p.x);
            let y = f64::from(p.y);
            loss += logistic_loss(z, y);
            let dz = sigmoid(z) - y;
            for (g, v) in grad[..n].iter_mut().zip(&p.x) {
                *g += dz * v * scale;
            }
            grad[n] += dz * scale;
        }
        (loss * scale, grad)
    }
}
