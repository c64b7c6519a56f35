//! Perturbation sampling inside the ball of radius ρ/4 around a point, and
//! the two point sets built from it: the perturbed misses of a classifier,
//! and κ perturbation rounds over a whole evaluation set.

use std::collections::HashSet;
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::classifier::{misses, Classifier};
use crate::data::{CoordKey, Dataset};
use crate::error::{Error, Result};
use crate::geometry::{polar_angle, sq_dist, ManifoldSpec, Shape};
use crate::rng::Seed;

pub const DEFAULT_MAX_REJECTIONS: usize = 1000;

/// Where perturbations may land.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauMode {
    /// Uniform on the part of the manifold inside the ball.
    Faithful,
    /// Uniform in the full ambient ball.
    Ambient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauFunction {
    rho: f64,
    mode: TauMode,
    spec: Option<ManifoldSpec>,
    max_rejections: usize,
}

impl TauFunction {
    pub fn new(rho: f64, mode: TauMode, spec: Option<ManifoldSpec>) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::range("rho must be positive"));
        }
        if mode == TauMode::Faithful && spec.is_none() {
            return Err(Error::range("faithful tau needs a manifold"));
        }
        Ok(TauFunction {
            rho,
            mode,
            spec,
            max_rejections: DEFAULT_MAX_REJECTIONS,
        })
    }

    pub fn faithful(rho: f64, spec: ManifoldSpec) -> Result<Self> {
        TauFunction::new(rho, TauMode::Faithful, Some(spec))
    }

    pub fn ambient(rho: f64) -> Result<Self> {
        TauFunction::new(rho, TauMode::Ambient, None)
    }

    pub fn with_max_rejections(mut self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::range("max_rejections must be ≥ 1"));
        }
        self.max_rejections = n;
        Ok(self)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Perturbation radius ρ/4.
    pub fn radius(&self) -> f64 {
        self.rho / 4.0
    }

    pub fn mode(&self) -> TauMode {
        self.mode
    }

    pub fn spec(&self) -> Option<&ManifoldSpec> {
        self.spec.as_ref()
    }

    pub fn max_rejections(&self) -> usize {
        self.max_rejections
    }

    /// One draw x̃ with 0 < ‖x̃ − x‖ ≤ ρ/4.
    pub fn sample<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        let r = self.radius();
        for _ in 0..self.max_rejections {
            let cand = match (self.mode, &self.spec) {
                (TauMode::Faithful, Some(spec)) => self.propose_on_manifold(spec, x, rng),
                _ => propose_in_ball(x, r, rng),
            };
            let d2 = sq_dist(&cand, x);
            if d2 > 0.0 && d2.sqrt() <= r {
                return Ok(cand);
            }
        }
        Err(Error::TauSupportExhausted)
    }

    fn propose_on_manifold<R: Rng + ?Sized>(&self, spec: &ManifoldSpec, x: &[f64], rng: &mut R) -> Vec<f64> {
        let r = self.radius();
        match spec.shape() {
            Shape::Circle { radius } => {
                // arc whose chord is r
                let half = 2.0 * (r / (2.0 * radius)).min(1.0).asin();
                let a = polar_angle(x[0], x[1]) + rng.random_range(-half..=half);
                spec.point_at(&[a])
            }
            Shape::Sphere { radius } => {
                let half = 2.0 * (r / (2.0 * radius)).min(1.0).asin();
                let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                let u = [x[0] / n, x[1] / n, x[2] / n];
                let (e1, e2) = orthonormal_complement(u);
                // uniform area on the cap: cos of the polar angle is uniform
                let c = rng.random_range(half.cos()..=1.0);
                let s = (1.0 - c * c).max(0.0).sqrt();
                let phi = rng.random_range(0.0..2.0 * PI);
                let (cp, sp) = (phi.cos(), phi.sin());
                let head: Vec<f64> = (0..3)
                    .map(|i| radius * (c * u[i] + s * (cp * e1[i] + sp * e2[i])))
                    .collect();
                spec.embed(&head)
            }
            Shape::Segment { length } => {
                let lo = (x[0] - r).max(0.0);
                let hi = (x[0] + r).min(length);
                spec.point_at(&[rng.random_range(lo..=hi)])
            }
        }
    }
}

fn propose_in_ball<R: Rng + ?Sized>(x: &[f64], r: f64, rng: &mut R) -> Vec<f64> {
    let n = x.len();
    let dir: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = r * rng.random::<f64>().powf(1.0 / n as f64) / norm;
    x.iter().zip(&dir).map(|(a, d)| a + scale * d).collect()
}

fn orthonormal_complement(u: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    // cross with the axis least aligned to u
    let axis = if u[0].abs() <= u[1].abs() && u[0].abs() <= u[2].abs() {
        [1.0, 0.0, 0.0]
    } else if u[1].abs() <= u[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    let e1 = cross(u, axis);
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    let e1 = [e1[0] / n, e1[1] / n, e1[2] / n];
    (e1, cross(u, e1))
}

/// Perturbations of selected source points, in source order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Perturbations {
    pub points: Vec<Vec<f64>>,
    /// Index into the source set of each entry of `points`.
    pub sources: Vec<usize>,
    /// Sources whose draws kept colliding with the excluded set, or whose
    /// support was exhausted.
    pub dropped: usize,
}

impl Perturbations {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One perturbation per listed index of `e`, re-drawn while it coincides with
/// a point of `e` (up to `max_rejections` times, then dropped). Source `i`
/// draws from `seed.index(i)`.
pub fn perturb_indices(tf: &TauFunction, e: &Dataset, indices: &[usize], seed: Seed) -> Perturbations {
    let excluded: HashSet<CoordKey> = e.keys();
    perturb_excluding(tf, e, indices, seed, &excluded)
}

fn perturb_excluding(
    tf: &TauFunction,
    e: &Dataset,
    indices: &[usize],
    seed: Seed,
    excluded: &HashSet<CoordKey>,
) -> Perturbations {
    let mut out = Perturbations::default();
    for &i in indices {
        let mut rng = seed.index(i as u64).rng();
        let x = &e.points()[i].x;
        let drawn = (0..tf.max_rejections()).find_map(|_| match tf.sample(x, &mut rng) {
            Ok(c) if excluded.contains(&CoordKey::of(&c)) => None,
            Ok(c) => Some(Some(c)),
            Err(_) => Some(None),
        });
        match drawn.flatten() {
            Some(c) => {
                out.points.push(c);
                out.sources.push(i);
            }
            None => out.dropped += 1,
        }
    }
    out
}

/// Perturbed misses: one τ draw for each point of `e` that `f` misclassifies
/// under `eval_seed`, excluding exact copies of points of `e`.
pub fn build_m(f: &Classifier, e: &Dataset, tf: &TauFunction, eval_seed: Seed, tau_seed: Seed) -> Result<Perturbations> {
    let missed = misses(f, e, eval_seed)?;
    Ok(perturb_indices(tf, e, &missed, tau_seed))
}

/// κ rounds over all of `e`, each point perturbed once per round; round `j`
/// draws from `seed.index(j)`.
pub fn generate_e_tilde(e: &Dataset, tf: &TauFunction, kappa: u64, seed: Seed) -> Result<Vec<Vec<f64>>> {
    if kappa == 0 {
        return Err(Error::range("kappa must be ≥ 1"));
    }
    let excluded = e.keys();
    let all: Vec<usize> = (0..e.len()).collect();
    let mut out = Vec::with_capacity(kappa as usize * e.len());
    for j in 0..kappa {
        out.extend(perturb_excluding(tf, e, &all, seed.index(j), &excluded).points);
    }
    Ok(out)
}
