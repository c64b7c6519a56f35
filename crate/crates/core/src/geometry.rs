//! Synthetic manifolds with known reach, volume and labeling rule, their
//! samplers, the sample-size and representativeness bounds that depend on
//! them, and an empirical cover-density check.
//!
//! Three shapes are supported, each embedded in the leading coordinates of
//! an ambient space of configurable dimension (remaining coordinates are 0):
//!
//! | shape   | intrinsic dim | reach μ        | volume |
//! |---------|---------------|----------------|--------|
//! | circle  | 1             | R              | 2πR    |
//! | sphere  | 2             | R              | 4πR²   |
//! | segment | 1             | configured cap | L      |
//!
//! The labeling rule is parametrized by the positive fraction `p`:
//! a circle point is positive when its polar angle lies in `[0, 2πp)`, a
//! sphere point when its normalized height exceeds `1 − 2p`, and a segment
//! point when its abscissa is below `pL`. Each region has measure exactly
//! `p` under the uniform distribution.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label, LabeledPoint};
use crate::error::{Error, Result};
use crate::rng::Seed;

pub const DEFAULT_SEGMENT_MU_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Circle { radius: f64 },
    Sphere { radius: f64 },
    Segment { length: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    #[serde(flatten)]
    shape: Shape,
    ambient_dim: usize,
    positive_fraction: f64,
    mu_cap: f64,
}

impl ManifoldSpec {
    pub fn new(shape: Shape, ambient_dim: usize, positive_fraction: f64) -> Result<Self> {
        let spec = ManifoldSpec {
            shape,
            ambient_dim,
            positive_fraction,
            mu_cap: DEFAULT_SEGMENT_MU_CAP,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn circle(radius: f64) -> Result<Self> {
        ManifoldSpec::new(Shape::Circle { radius }, 2, 0.5)
    }

    pub fn sphere(radius: f64) -> Result<Self> {
        ManifoldSpec::new(Shape::Sphere { radius }, 3, 0.5)
    }

    pub fn segment(length: f64) -> Result<Self> {
        ManifoldSpec::new(Shape::Segment { length }, 1, 0.5)
    }

    pub fn with_positive_fraction(mut self, p: f64) -> Result<Self> {
        self.positive_fraction = p;
        self.validate()?;
        Ok(self)
    }

    pub fn with_ambient_dim(mut self, n: usize) -> Result<Self> {
        self.ambient_dim = n;
        self.validate()?;
        Ok(self)
    }

    /// Reach used for a segment, whose true reach is infinite.
    pub fn with_mu_cap(mut self, cap: f64) -> Result<Self> {
        self.mu_cap = cap;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let size = match self.shape {
            Shape::Circle { radius } | Shape::Sphere { radius } => radius,
            Shape::Segment { length } => length,
        };
        if !(size.is_finite() && size > 0.0) {
            return Err(Error::range("manifold size must be finite and > 0"));
        }
        if self.ambient_dim < self.natural_dim() {
            return Err(Error::range(format!(
                "ambient_dim must be at least {} for this shape",
                self.natural_dim()
            )));
        }
        if !(self.positive_fraction > 0.0 && self.positive_fraction <= 1.0) {
            return Err(Error::range("positive_fraction must satisfy 0 < p ≤ 1"));
        }
        if !(self.mu_cap.is_finite() && self.mu_cap > 0.0) {
            return Err(Error::range("mu_cap must be finite and > 0"));
        }
        Ok(())
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn positive_fraction(&self) -> f64 {
        self.positive_fraction
    }

    /// Dimension of the smallest ambient space the shape lives in.
    pub fn natural_dim(&self) -> usize {
        match self.shape {
            Shape::Circle { .. } => 2,
            Shape::Sphere { .. } => 3,
            Shape::Segment { .. } => 1,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self.shape {
            Shape::Circle { .. } | Shape::Segment { .. } => 1,
            Shape::Sphere { .. } => 2,
        }
    }

    /// Condition number (reach).
    pub fn mu(&self) -> f64 {
        match self.shape {
            Shape::Circle { radius } | Shape::Sphere { radius } => radius,
            Shape::Segment { .. } => self.mu_cap,
        }
    }

    pub fn volume(&self) -> f64 {
        match self.shape {
            Shape::Circle { radius } => 2.0 * PI * radius,
            Shape::Sphere { radius } => 4.0 * PI * radius * radius,
            Shape::Segment { length } => length,
        }
    }

    pub(crate) fn embed(&self, head: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient_dim];
        x[..head.len()].copy_from_slice(head);
        x
    }

    /// Point at local parameters: circle `[angle]`, sphere `[height, azimuth]`
    /// with height in `[-1, 1]`, segment `[t]` with `t` in `[0, L]`.
    pub fn point_at(&self, params: &[f64]) -> Vec<f64> {
        match self.shape {
            Shape::Circle { radius } => {
                let a = params[0];
                self.embed(&[radius * a.cos(), radius * a.sin()])
            }
            Shape::Sphere { radius } => {
                let (h, phi) = (params[0].clamp(-1.0, 1.0), params[1]);
                let s = (1.0 - h * h).sqrt();
                self.embed(&[radius * s * phi.cos(), radius * s * phi.sin(), radius * h])
            }
            Shape::Segment { .. } => self.embed(&[params[0]]),
        }
    }

    fn random_params<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self.shape {
            Shape::Circle { .. } => vec![rng.random_range(0.0..2.0 * PI)],
            Shape::Sphere { .. } => vec![rng.random_range(-1.0..=1.0), rng.random_range(0.0..2.0 * PI)],
            Shape::Segment { length } => vec![rng.random_range(0.0..=length)],
        }
    }

    /// Ground-truth label σ(x). Off-manifold points are labeled through
    /// their radial projection (circle, sphere) or first coordinate (segment).
    pub fn label(&self, x: &[f64]) -> Label {
        let p = self.positive_fraction;
        if p >= 1.0 {
            return 1;
        }
        let positive = match self.shape {
            Shape::Circle { .. } => polar_angle(x[0], x[1]) < 2.0 * PI * p,
            Shape::Sphere { .. } => {
                let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                n > 0.0 && x[2] / n > 1.0 - 2.0 * p
            }
            Shape::Segment { length } => x[0] < p * length,
        };
        Label::from(positive)
    }

    /// Residual of the shape equation (0 on the manifold).
    pub fn shape_residual(&self, x: &[f64]) -> f64 {
        let tail: f64 = x[self.natural_dim()..].iter().map(|v| v.abs()).sum();
        let head = match self.shape {
            Shape::Circle { radius } => ((x[0] * x[0] + x[1] * x[1]).sqrt() - radius).abs(),
            Shape::Sphere { radius } => {
                ((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt() - radius).abs()
            }
            Shape::Segment { length } => (-x[0]).max(x[0] - length).max(0.0),
        };
        head + tail
    }

    fn labeled(&self, x: Vec<f64>) -> LabeledPoint {
        let y = self.label(&x);
        LabeledPoint { x, y }
    }

    /// `n` deterministic, (near-)equispaced mesh points: equal angles on the
    /// circle, a Fibonacci lattice on the sphere, equal steps on the segment.
    pub fn mesh(&self, n: usize) -> Vec<Vec<f64>> {
        match self.shape {
            Shape::Circle { .. } => (0..n)
                .map(|i| self.point_at(&[2.0 * PI * i as f64 / n as f64]))
                .collect(),
            Shape::Sphere { .. } => {
                let golden = PI * (3.0 - 5f64.sqrt());
                (0..n)
                    .map(|i| {
                        let h = 1.0 - (2 * i + 1) as f64 / n as f64;
                        self.point_at(&[h, golden * i as f64])
                    })
                    .collect()
            }
            Shape::Segment { length } => {
                let steps = (n.max(2) - 1) as f64;
                (0..n).map(|i| self.point_at(&[length * i as f64 / steps])).collect()
            }
        }
    }
}

/// Polar angle in `[0, 2π)`.
pub fn polar_angle(x: f64, y: f64) -> f64 {
    let a = y.atan2(x);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `n` i.i.d. points from the uniform measure on the manifold, labeled by σ.
pub fn sample_manifold(spec: &ManifoldSpec, n: usize, seed: Seed) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::range("sample size n must be ≥ 1"));
    }
    let mut rng = seed.rng();
    let points = (0..n)
        .map(|_| {
            let params = spec.random_params(&mut rng);
            spec.labeled(spec.point_at(&params))
        })
        .collect();
    Dataset::new("sample", spec.ambient_dim(), points)
}

/// `n` i.i.d. points from the uniform measure restricted to a connected
/// region covering `fraction` of the manifold, used to build a training set
/// that is deliberately not representative. The region straddles the label
/// boundary (circle: arc centred at angle 0; sphere: cap centred on the
/// `+x` equator point; segment: interval centred at `pL`).
pub fn sample_region(spec: &ManifoldSpec, n: usize, fraction: f64, seed: Seed) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::range("sample size n must be ≥ 1"));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::range("region fraction must satisfy 0 < f ≤ 1"));
    }
    let mut rng = seed.rng();
    let points = (0..n)
        .map(|_| {
            let x = match spec.shape() {
                Shape::Circle { .. } => {
                    let a = rng.random_range(-PI * fraction..PI * fraction);
                    spec.point_at(&[a])
                }
                Shape::Sphere { radius } => {
                    // uniform on the cap around +x with area fraction f
                    let c = rng.random_range(1.0 - 2.0 * fraction..=1.0);
                    let phi = rng.random_range(0.0..2.0 * PI);
                    let s = (1.0 - c * c).max(0.0).sqrt();
                    spec.embed(&[radius * c, radius * s * phi.cos(), radius * s * phi.sin()])
                }
                Shape::Segment { length } => {
                    let w = fraction * length;
                    let lo = (spec.positive_fraction() * length - w / 2.0).clamp(0.0, length - w);
                    spec.point_at(&[rng.random_range(lo..=lo + w)])
                }
            };
            spec.labeled(x)
        })
        .collect();
    Dataset::new("sample", spec.ambient_dim(), points)
}

fn check_rho(rho: f64, mu: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 && rho < mu / 2.0 {
        Ok(())
    } else {
        Err(Error::range(format!(
            "rho violates 0 < ρ < μ/2 (rho = {rho}, mu = {mu})"
        )))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 0.5 {
        Ok(())
    } else {
        Err(Error::range(format!("delta violates 0 < δ ≤ 1/2 (delta = {delta})")))
    }
}

/// Γ(m/2 + 1), i.e. (m/2)!, for a whole number m.
pub fn half_factorial(m: usize) -> f64 {
    let x = m as f64 / 2.0 + 1.0;
    let (mut g, mut t) = if m.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while t < x - 0.25 {
        g *= t;
        t += 1.0;
    }
    g
}

/// Volume of the m-dimensional Euclidean ball of radius `r`.
pub fn ball_volume(m: usize, r: f64) -> f64 {
    PI.powf(m as f64 / 2.0) * r.powi(m as i32) / half_factorial(m)
}

/// β(ρ) = vol(M) / (cos^m(arcsin(ρ/2μ)) · vol(B^m_ρ)).
pub fn beta(spec: &ManifoldSpec, rho: f64) -> Result<f64> {
    let mu = spec.mu();
    check_rho(rho, mu)?;
    let m = spec.intrinsic_dim();
    let s = rho / (2.0 * mu);
    // cos(arcsin s) = √(1 − s²)
    let cos_m = (1.0 - s * s).sqrt().powi(m as i32);
    Ok(spec.volume() / (cos_m * ball_volume(m, rho)))
}

/// Smallest sample size strictly above β(ρ/4)(ln β(ρ/8) + ln(1/δ)).
pub fn niyogi_smale_n(spec: &ManifoldSpec, rho: f64, delta: f64) -> Result<u64> {
    check_rho(rho, spec.mu())?;
    check_delta(delta)?;
    let rhs = niyogi_smale_rhs(spec, rho, delta)?;
    Ok((rhs.floor() as i64 + 1).max(1) as u64)
}

/// The real-valued right-hand side behind [`niyogi_smale_n`].
pub fn niyogi_smale_rhs(spec: &ManifoldSpec, rho: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(beta(spec, rho / 4.0)? * (beta(spec, rho / 8.0)?.ln() + (1.0 / delta).ln()))
}

/// Λ_ρ = (ρ√π/4)(1 − ρ²/64μ²)^{1/2}, for 0 < ρ ≤ μ/2.
pub fn lambda_rho(rho: f64, mu: f64) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::range("mu must be finite and > 0"));
    }
    // closed at μ/2: the expression stays well defined on the boundary
    if !(rho.is_finite() && rho > 0.0 && rho <= mu / 2.0) {
        return Err(Error::range(format!("rho violates 0 < ρ ≤ μ/2 (rho = {rho}, mu = {mu})")));
    }
    Ok(rho * PI.sqrt() / 4.0 * (1.0 - rho * rho / (64.0 * mu * mu)).sqrt())
}

/// Representativeness level (Λ_ρ^m / ((m/2)! vol))^{1/2}, leading constant 1.
pub fn epsilon_bound(spec: &ManifoldSpec, rho: f64) -> Result<f64> {
    check_rho(rho, spec.mu())?;
    let m = spec.intrinsic_dim();
    let lam = lambda_rho(rho, spec.mu())?;
    Ok((lam.powi(m as i32) / (half_factorial(m) * spec.volume())).sqrt())
}

fn d_bound_argument(spec: &ManifoldSpec, rho: f64) -> Result<f64> {
    let m = spec.intrinsic_dim();
    let mu = spec.mu();
    check_rho(rho, mu)?;
    let lam = lambda_rho(rho, mu)?;
    let q = rho * rho / (mu * mu);
    let ratio = ((64.0 - q) / (256.0 - q)).powf(m as f64 / 2.0);
    Ok(2f64.powi(m as i32) * ratio * half_factorial(m) * spec.volume() / lam.powi(m as i32))
}

/// VC-dimension level log(2^m ((64 − ρ²/μ²)/(256 − ρ²/μ²))^{m/2} (m/2)! vol / Λ_ρ^m),
/// natural log, leading constant 1.
pub fn d_bound(spec: &ManifoldSpec, rho: f64) -> Result<f64> {
    Ok(d_bound_argument(spec, rho)?.ln())
}

/// [`d_bound`] with an explicit logarithm base.
pub fn d_bound_with_base(spec: &ManifoldSpec, rho: f64, base: f64) -> Result<f64> {
    if !(base > 0.0 && base != 1.0 && base.is_finite()) {
        return Err(Error::range("log base must be positive and ≠ 1"));
    }
    Ok(d_bound_argument(spec, rho)?.ln() / base.ln())
}

/// ⌈c (d + ln(1/δ)) / ε²⌉.
pub fn hanneke_n(d: f64, epsilon: f64, delta: f64, c: f64) -> Result<u64> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::range("d must be > 0"));
    }
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::range("epsilon violates 0 < ε ≤ 1/2"));
    }
    check_delta(delta)?;
    if !(c.is_finite() && c >= std::f64::consts::LN_2) {
        return Err(Error::range("constant c violates c ≥ ln 2"));
    }
    Ok((c * (d + (1.0 / delta).ln()) / (epsilon * epsilon)).ceil() as u64)
}

/// ⌈((|X| + |Δ|)/(|X|(1 − c) + 2|Δ|)) ln(|E|/δ)⌉.
pub fn kappa_bound(size_x: u64, size_delta: u64, c_frac: f64, size_e: u64, delta: f64) -> Result<u64> {
    if !(c_frac > 0.0 && c_frac < 1.0) {
        return Err(Error::range("c violates 0 < c < 1"));
    }
    if size_e < 1 {
        return Err(Error::range("|E| must be ≥ 1"));
    }
    check_delta(delta)?;
    let (x, dl) = (size_x as f64, size_delta as f64);
    let denom = x * (1.0 - c_frac) + 2.0 * dl;
    if denom <= 0.0 {
        return Err(Error::range("requires |X|(1 − c) + 2|Δ| > 0"));
    }
    Ok(((x + dl) / denom * (size_e as f64 / delta).ln()).ceil() as u64)
}

/// Inputs to the κ entry of a [`BoundsReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaParams {
    pub c_frac: f64,
    pub delta_size: u64,
    /// |X|; defaults to the smallest size meeting |E ∪ Δ| ≤ c|X|.
    pub support_size: Option<u64>,
}

impl Default for KappaParams {
    fn default() -> Self {
        KappaParams {
            c_frac: 0.5,
            delta_size: 0,
            support_size: None,
        }
    }
}

/// Every geometric bound for one `(manifold, ρ, δ)`, serialized with keys in
/// the order `rho, delta, beta, lambda_rho, n_min, epsilon_min, d_min, kappa_min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub rho: f64,
    pub delta: f64,
    pub beta: f64,
    pub lambda_rho: f64,
    pub n_min: u64,
    pub epsilon_min: f64,
    pub d_min: f64,
    pub kappa_min: u64,
}

impl BoundsReport {
    pub fn compute(spec: &ManifoldSpec, rho: f64, delta: f64, kappa: KappaParams) -> Result<Self> {
        let n_min = niyogi_smale_n(spec, rho, delta)?;
        let support = kappa.support_size.unwrap_or_else(|| {
            ((n_min + kappa.delta_size) as f64 / kappa.c_frac).ceil() as u64
        });
        Ok(BoundsReport {
            rho,
            delta,
            beta: beta(spec, rho)?,
            lambda_rho: lambda_rho(rho, spec.mu())?,
            n_min,
            epsilon_min: epsilon_bound(spec, rho)?,
            d_min: d_bound(spec, rho)?,
            kappa_min: kappa_bound(support, kappa.delta_size, kappa.c_frac, n_min, delta)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverResult {
    pub covered: bool,
    pub uncovered_fraction: f64,
}

/// Bucketed point set answering "is any point within r of q".
struct PointIndex<'a> {
    points: &'a [Vec<f64>],
    radius: f64,
    cells: Option<HashMap<Vec<i64>, Vec<usize>>>,
}

impl<'a> PointIndex<'a> {
    fn new(points: &'a [Vec<f64>], radius: f64) -> Self {
        let dim = points.first().map_or(0, Vec::len);
        // neighbourhood scans grow as 3^dim; past 3 dims brute force wins
        let cells = (dim <= 3).then(|| {
            let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
            for (i, p) in points.iter().enumerate() {
                cells.entry(Self::cell(p, radius)).or_default().push(i);
            }
            cells
        });
        PointIndex { points, radius, cells }
    }

    fn cell(p: &[f64], radius: f64) -> Vec<i64> {
        p.iter().map(|v| (v / radius).floor() as i64).collect()
    }

    fn any_within(&self, q: &[f64]) -> bool {
        let r2 = self.radius * self.radius;
        let near = |i: usize| sq_dist(&self.points[i], q) <= r2;
        match &self.cells {
            None => (0..self.points.len()).any(near),
            Some(cells) => {
                let base = Self::cell(q, self.radius);
                let dim = base.len();
                let mut offset = vec![-1i64; dim];
                loop {
                    let key: Vec<i64> = base.iter().zip(&offset).map(|(b, o)| b + o).collect();
                    if let Some(ids) = cells.get(&key) {
                        if ids.iter().any(|&i| near(i)) {
                            return true;
                        }
                    }
                    // odometer over {-1, 0, 1}^dim
                    let mut j = 0;
                    while j < dim && offset[j] == 1 {
                        offset[j] = -1;
                        j += 1;
                    }
                    if j == dim {
                        return false;
                    }
                    offset[j] += 1;
                }
            }
        }
    }
}

pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// Checks whether the union of `radius`-balls around `points` contains every
/// point of a deterministic `mesh_n`-point mesh of the manifold.
pub fn cover_check(points: &[Vec<f64>], spec: &ManifoldSpec, radius: f64, mesh_n: usize) -> Result<CoverResult> {
    if mesh_n < 100 {
        return Err(Error::range("mesh_n must be ≥ 100"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::range("cover radius must be > 0"));
    }
    if let Some(p) = points.iter().find(|p| p.len() != spec.ambient_dim()) {
        return Err(Error::DimensionMismatch {
            expected: spec.ambient_dim(),
            found: p.len(),
        });
    }
    if points.is_empty() {
        return Ok(CoverResult {
            covered: false,
            uncovered_fraction: 1.0,
        });
    }
    let index = PointIndex::new(points, radius);
    let mesh = spec.mesh(mesh_n);
    let uncovered = mesh.iter().filter(|q| !index.any_within(q)).count();
    Ok(CoverResult {
        covered: uncovered == 0,
        uncovered_fraction: uncovered as f64 / mesh_n as f64,
    })
}
