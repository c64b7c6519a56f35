//! `train_model(f, D, θ)`: decodes the reserved hyperparameter atoms and
//! runs the kind-specific training. Gradient models use random-reshuffling
//! mini-batch SGD; the idealized learners delegate to their own fit.
//!
//! Training cost is counted in per-point gradient (or score) evaluations:
//! exactly `epochs · |D|` per call, for every kind.

use std::cmp::Ordering;

use rand::seq::SliceRandom;

use crate::classifier::Classifier;
use crate::data::{Dataset, LabeledPoint};
use crate::error::{Error, Result};
use crate::hyper::{HyperparamAtom, HyperparamSet};
use crate::models::{GradientModel, MlpModel};
use crate::rng::Seed;

pub const KEY_ETA: &str = "eta";
pub const KEY_BATCH_SIZE: &str = "batch_size";
pub const KEY_SEED: &str = "seed";
pub const KEY_EPOCHS: &str = "epochs";
pub const KEY_LIPSCHITZ: &str = "lipschitz";
pub const KEY_GRAD_BOUND: &str = "grad_bound";
pub const KEY_HIDDEN: &str = "hidden";

pub const DEFAULT_LIPSCHITZ: f64 = 0.25;
pub const DEFAULT_GRAD_BOUND: f64 = 1.0;

/// Decoded form of one hyperparameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub eta: f64,
    pub batch_size: usize,
    pub seed: u64,
    pub epochs: usize,
    /// Smoothness constant L of the loss; reported in bounds only.
    pub lipschitz: f64,
    /// Stochastic-gradient bound G; reported in bounds only.
    pub grad_bound: f64,
    /// MLP hidden width override.
    pub hidden: Option<usize>,
    /// Atoms with non-reserved keys, passed through untouched.
    pub extra: Vec<HyperparamAtom>,
}

fn required<'a>(theta: &'a HyperparamSet, key: &str) -> Result<&'a str> {
    theta
        .get(key)
        .ok_or_else(|| Error::MissingHyperparameter(key.to_string()))
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.trim()
        .parse()
        .map_err(|e| Error::InvalidHyperparameter(format!("cannot parse {key} = `{v}`: {e}")))
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidHyperparameter(format!("{key} must be positive")))
    }
}

pub fn decode_theta(theta: &HyperparamSet) -> Result<TrainConfig> {
    let eta = positive(KEY_ETA, parse(KEY_ETA, required(theta, KEY_ETA)?)?)?;
    let batch_size: usize = parse(KEY_BATCH_SIZE, required(theta, KEY_BATCH_SIZE)?)?;
    if batch_size == 0 {
        return Err(Error::InvalidHyperparameter("batch_size must be ≥ 1".into()));
    }
    let seed: u64 = parse(KEY_SEED, required(theta, KEY_SEED)?)?;
    let epochs: usize = parse(KEY_EPOCHS, required(theta, KEY_EPOCHS)?)?;
    if epochs == 0 {
        return Err(Error::InvalidHyperparameter("epochs must be ≥ 1".into()));
    }
    let optional = |key: &str, default: f64| -> Result<f64> {
        match theta.get(key) {
            Some(v) => positive(key, parse(key, v)?),
            None => Ok(default),
        }
    };
    let hidden = match theta.get(KEY_HIDDEN) {
        Some(v) => match parse::<usize>(KEY_HIDDEN, v)? {
            0 => return Err(Error::InvalidHyperparameter("hidden must be ≥ 1".into())),
            h => Some(h),
        },
        None => None,
    };
    let reserved = [KEY_ETA, KEY_BATCH_SIZE, KEY_SEED, KEY_EPOCHS, KEY_LIPSCHITZ, KEY_GRAD_BOUND, KEY_HIDDEN];
    Ok(TrainConfig {
        eta,
        batch_size,
        seed,
        epochs,
        lipschitz: optional(KEY_LIPSCHITZ, DEFAULT_LIPSCHITZ)?,
        grad_bound: optional(KEY_GRAD_BOUND, DEFAULT_GRAD_BOUND)?,
        hidden,
        extra: theta
            .atoms()
            .iter()
            .filter(|a| !reserved.contains(&a.key.as_str()))
            .cloned()
            .collect(),
    })
}

/// Lexicographic order on coordinates, then label.
fn point_order(a: &LabeledPoint, b: &LabeledPoint) -> Ordering {
    a.x.iter()
        .zip(&b.x)
        .map(|(u, v)| u.total_cmp(v))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
        .then(a.y.cmp(&b.y))
}

/// Epoch `e`'s visiting order over `n` points for seed `s`.
pub fn epoch_permutation(seed: u64, epoch: usize, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut Seed::new(seed).stream("shuffle").index(epoch as u64).rng());
    order
}

/// Random-reshuffling SGD from `model`'s current parameters. The data are
/// put in a canonical order first, so the result does not depend on the
/// order of `d`.
pub fn sgd<M: GradientModel>(mut model: M, d: &Dataset, cfg: &TrainConfig) -> M {
    let mut points: Vec<&LabeledPoint> = d.iter().collect();
    points.sort_by(|a, b| point_order(a, b));
    let mut params = model.params();
    for epoch in 0..cfg.epochs {
        let order = epoch_permutation(cfg.seed, epoch, points.len());
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<&LabeledPoint> = chunk.iter().map(|&i| points[i]).collect();
            let (_, grad) = model.loss_grad(&batch);
            for (w, g) in params.iter_mut().zip(&grad) {
                *w -= cfg.eta * g;
            }
            model.set_params(&params);
        }
    }
    model
}

/// Mean logistic loss of `model` on `d`.
pub fn training_loss<M: GradientModel>(model: &M, d: &Dataset) -> f64 {
    let batch: Vec<&LabeledPoint> = d.iter().collect();
    model.loss(&batch)
}

fn check_data(f: &Classifier, d: &Dataset) -> Result<()> {
    if d.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if d.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: d.dim(),
        });
    }
    Ok(())
}

/// Trains `f` on `d` with an already-decoded configuration. Unlike
/// [`train_model`] this accepts any finite `eta`, including 0.
pub fn train_with_config(f: &Classifier, d: &Dataset, cfg: &TrainConfig) -> Result<Classifier> {
    check_data(f, d)?;
    if cfg.batch_size == 0 || !cfg.eta.is_finite() {
        return Err(Error::InvalidHyperparameter("batch_size must be ≥ 1 and eta finite".into()));
    }
    Ok(match f {
        Classifier::Random(c) => Classifier::Random(c.fit(d)),
        Classifier::BallMemory(c) => Classifier::BallMemory(c.memory_train(d)),
        Classifier::Logistic(c) => Classifier::Logistic(sgd(c.clone(), d, cfg)),
        Classifier::Mlp(c) => {
            // weights always start from θ's seed
            let hidden = cfg.hidden.unwrap_or(c.hidden());
            let init = MlpModel::initialized(c.dim(), hidden, Seed::new(cfg.seed).stream("init"));
            Classifier::Mlp(sgd(init, d, cfg))
        }
        Classifier::Oracle(_) => f.clone(),
    })
}

/// `train-model(f, D, θ)`.
pub fn train_model(f: &Classifier, d: &Dataset, theta: &HyperparamSet) -> Result<Classifier> {
    train_with_config(f, d, &decode_theta(theta)?)
}

/// Cost of [`train_model`] in per-point evaluations: `epochs · |D|`.
pub fn measure_train_steps(f: &Classifier, d: &Dataset, theta: &HyperparamSet) -> Result<u64> {
    check_data(f, d)?;
    Ok(decode_theta(theta)?.epochs as u64 * d.len() as u64)
}
