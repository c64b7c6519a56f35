//! The uniform prediction interface shared by Timaeus and Socrates, and the
//! error/accuracy metrics.
//!
//! Stochastic classifiers draw from an explicit generator. The metrics give
//! point `i` of an evaluation set its own stream `seed.index(i)`, so a
//! prediction depends only on (model, point, seed, position) and can be
//! recomputed exactly later, e.g. when collecting misclassified points.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::geometry::{sample_manifold, ManifoldSpec};
use crate::models::{BallMemoryClassifier, LogisticModel, MlpModel, OracleSocrates, RandomClassifier};
use crate::rng::Seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Random,
    BallMemory,
    Logistic,
    Mlp,
    Oracle,
    NoisyOracle,
}

impl ClassifierKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Random => "random",
            ClassifierKind::BallMemory => "ball_memory",
            ClassifierKind::Logistic => "logistic",
            ClassifierKind::Mlp => "mlp",
            ClassifierKind::Oracle => "oracle",
            ClassifierKind::NoisyOracle => "noisy_oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Random(RandomClassifier),
    BallMemory(BallMemoryClassifier),
    Logistic(LogisticModel),
    Mlp(MlpModel),
    Oracle(OracleSocrates),
}

impl Classifier {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            Classifier::Random(_) => ClassifierKind::Random,
            Classifier::BallMemory(_) => ClassifierKind::BallMemory,
            Classifier::Logistic(_) => ClassifierKind::Logistic,
            Classifier::Mlp(_) => ClassifierKind::Mlp,
            Classifier::Oracle(o) if o.noise_rate() == 0.0 => ClassifierKind::Oracle,
            Classifier::Oracle(_) => ClassifierKind::NoisyOracle,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Classifier::Random(c) => c.dim(),
            Classifier::BallMemory(c) => c.dim(),
            Classifier::Logistic(c) => c.dim(),
            Classifier::Mlp(c) => c.dim(),
            Classifier::Oracle(c) => c.dim(),
        }
    }

    /// True when predictions consume randomness.
    pub fn is_stochastic(&self) -> bool {
        match self {
            Classifier::Random(_) | Classifier::BallMemory(_) => true,
            Classifier::Logistic(_) | Classifier::Mlp(_) => false,
            Classifier::Oracle(o) => o.noise_rate() > 0.0,
        }
    }

    pub fn predict_with<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Result<Label> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(match self {
            Classifier::Random(c) => c.predict(rng),
            Classifier::BallMemory(c) => c.predict(x, rng),
            Classifier::Logistic(c) => c.predict(x),
            Classifier::Mlp(c) => c.predict(x),
            Classifier::Oracle(c) => c.label(x, rng),
        })
    }

    pub fn predict(&self, x: &[f64], seed: Seed) -> Result<Label> {
        self.predict_with(x, &mut seed.rng())
    }
}

fn check_eval(f: &Classifier, e: &Dataset) -> Result<()> {
    if e.is_empty() {
        return Err(Error::EmptyEvaluationSet);
    }
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: e.dim(),
        });
    }
    Ok(())
}

/// Predictions on every point of `e`; point `i` uses stream `seed.index(i)`.
pub fn predictions(f: &Classifier, e: &Dataset, seed: Seed) -> Result<Vec<Label>> {
    check_eval(f, e)?;
    e.iter()
        .enumerate()
        .map(|(i, p)| f.predict(&p.x, seed.index(i as u64)))
        .collect()
}

/// Indices of the points of `e` that `f` misclassifies.
pub fn misses(f: &Classifier, e: &Dataset, seed: Seed) -> Result<Vec<usize>> {
    let pred = predictions(f, e, seed)?;
    Ok(e.iter()
        .zip(pred)
        .enumerate()
        .filter(|(_, (p, y))| p.y != *y)
        .map(|(i, _)| i)
        .collect())
}

/// Misclassification rate on `e`.
pub fn err(f: &Classifier, e: &Dataset, seed: Seed) -> Result<f64> {
    Ok(misses(f, e, seed)?.len() as f64 / e.len() as f64)
}

/// `1 − err`.
pub fn acc(f: &Classifier, e: &Dataset, seed: Seed) -> Result<f64> {
    Ok(1.0 - err(f, e, seed)?)
}

/// Monte Carlo estimate of the true error against the labeling rule of
/// `spec`, from `n_mc` fresh samples.
pub fn estimate_true_error(f: &Classifier, spec: &ManifoldSpec, n_mc: usize, seed: Seed) -> Result<f64> {
    if n_mc == 0 {
        return Err(Error::range("n_mc must be ≥ 1"));
    }
    let sample = sample_manifold(spec, n_mc, seed.stream("sample"))?;
    err(f, &sample, seed.stream("predict"))
}
