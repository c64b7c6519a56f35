use rand::Rng;

use crate::data::{Label, LabeledPoint};
use crate::rng::Seed;

use super::{logistic_loss, sigmoid, GradientModel};

/// One hidden `tanh` layer feeding a sigmoid output unit.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    dim: usize,
    hidden: usize,
    /// hidden × dim, row-major
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
}

impl MlpModel {
    /// Untrained template with zero weights; training initializes from θ's seed.
    pub fn new(dim: usize, hidden: usize) -> Self {
        MlpModel {
            dim,
            hidden,
            w1: vec![0.0; hidden * dim],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    /// Uniform weights in ±1/√fan_in drawn from `seed`.
    pub fn initialized(dim: usize, hidden: usize, seed: Seed) -> Self {
        let mut rng = seed.rng();
        let a1 = 1.0 / (dim.max(1) as f64).sqrt();
        let a2 = 1.0 / (hidden.max(1) as f64).sqrt();
        let mut draw = |n: usize, a: f64| -> Vec<f64> { (0..n).map(|_| rng.random_range(-a..=a)).collect() };
        let w1 = draw(hidden * dim, a1);
        let b1 = draw(hidden, a1);
        let w2 = draw(hidden, a2);
        let b2 = draw(1, a2)[0];
        MlpModel { dim, hidden, w1, b1, w2, b2 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    fn activations(&self, x: &[f64]) -> Vec<f64> {
        (0..self.hidden)
            .map(|j| {
                let row = &self.w1[j * self.dim..(j + 1) * self.dim];
                (row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.b1[j]).tanh()
            })
            .collect()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        Label::from(self.score(x) >= 0.5)
    }
}

impl GradientModel for MlpModel {
    fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.w1.len() + 2 * self.hidden + 1);
        p.extend_from_slice(&self.w1);
        p.extend_from_slice(&self.b1);
        p.extend_from_slice(&self.w2);
        p.push(self.b2);
        p
    }

    fn set_params(&mut self, p: &[f64]) {
        let (n1, h) = (self.w1.len(), self.hidden);
        self.w1.copy_from_slice(&p[..n1]);
        self.b1.copy_from_slice(&p[n1..n1 + h]);
        self.w2.copy_from_slice(&p[n1 + h..n1 + 2 * h]);
        self.b2 = p[n1 + 2 * h];
    }

    fn logit(&self, x: &[f64]) -> f64 {
        let a = self.activations(x);
        a.iter().zip(&self.w2).map(|(a, w)| a * w).sum::<f64>() + self.b2
    }

    fn loss_grad(&self, batch: &[&LabeledPoint]) -> (f64, Vec<f64>) {
        let (d, h) = (self.dim, self.hidden);
        let n1 = self.w1.len();
        let mut grad = vec![0.0; n1 + 2 * h + 1];
        let mut loss = 0.0;
        let scale = 1.0 / batch.len() as f64;
        for p in batch {
            let a = self.activations(&p.x);
            let z = a.iter().zip(&self.w2).map(|(a, w)| a * w).sum::<f64>() + self.b2;
            let y = f64::from(p.y);
            loss += logistic_loss(z, y);
            let dz = (sigmoid(z) - y) * scale;
            for j in 0..h {
                grad[n1 + h + j] += dz * a[j];
                // d tanh(u)/du = 1 − tanh²(u)
                let du = dz * self.w2[j] * (1.0 - a[j] * a[j]);
                grad[n1 + j] += du;
                for (g, v) in grad[j * d..(j + 1) * d].iter_mut().zip(&p.x) {
                    *g += du * v;
                }
            }
            grad[n1 + 2 * h] += dz;
        }
        (loss * scale, grad)
    }
}
