//! 256-bit reference evaluations of the closed-form bounds.

use astro_float::{BigFloat, Consts, RoundingMode};

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Oracle {
    cc: Consts,
}

fn big(v: f64) -> BigFloat {
    BigFloat::from_f64(v, P)
}

fn to_f64(v: &BigFloat) -> f64 {
    v.to_string().parse().expect("finite decimal")
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            cc: Consts::new().expect("constants cache"),
        }
    }
}

/// Shape data needed by the geometric bounds: intrinsic dimension, volume
/// and reach.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub m: usize,
    pub vol: f64,
    pub mu: f64,
}

impl Shape {
    pub fn circle(r: f64) -> Self {
        Shape {
            m: 1,
            vol: 2.0 * std::f64::consts::PI * r,
            mu: r,
        }
    }

    pub fn sphere(r: f64) -> Self {
        Shape {
            m: 2,
            vol: 4.0 * std::f64::consts::PI * r * r,
            mu: r,
        }
    }
}

impl Oracle {
    fn pi(&mut self) -> BigFloat {
        self.cc.pi(P, RM)
    }

    fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(P, RM, &mut self.cc)
    }

    fn pow(&mut self, x: &BigFloat, e: &BigFloat) -> BigFloat {
        x.pow(e, P, RM, &mut self.cc)
    }

    /// Γ(m/2 + 1) by the recurrence Γ(x+1) = xΓ(x), from Γ(1) = 1 or Γ(1/2) = √π.
    fn gamma_half(&mut self, m: usize) -> BigFloat {
        let (mut g, mut x) = if m.is_multiple_of(2) {
            (big(1.0), big(1.0))
        } else {
            (self.pi().sqrt(P, RM), big(0.5))
        };
        let target = big(m as f64 / 2.0 + 1.0);
        while x < target {
            g = g.mul(&x, P, RM);
            x = x.add(&big(1.0), P, RM);
        }
        g
    }

    fn ball(&mut self, m: usize, r: &BigFloat) -> BigFloat {
        let pi = self.pi();
        let pi_half = self.pow(&pi, &big(m as f64 / 2.0));
        pi_half.mul(&r.powi(m, P, RM), P, RM).div(&self.gamma_half(m), P, RM)
    }

    fn beta_big(&mut self, s: Shape, rho: f64) -> BigFloat {
        let ratio = big(rho).div(&big(2.0 * s.mu), P, RM);
        let c = ratio.asin(P, RM, &mut self.cc).cos(P, RM, &mut self.cc);
        let denom = c.powi(s.m, P, RM).mul(&self.ball(s.m, &big(rho)), P, RM);
        big(s.vol).div(&denom, P, RM)
    }

    pub fn beta(&mut self, s: Shape, rho: f64) -> f64 {
        to_f64(&self.beta_big(s, rho))
    }

    pub fn niyogi_smale_rhs(&mut self, s: Shape, rho: f64, delta: f64) -> f64 {
        let b4 = self.beta_big(s, rho / 4.0);
        let b8 = self.beta_big(s, rho / 8.0);
        let inv = big(1.0).div(&big(delta), P, RM);
        let logs = self.ln(&b8).add(&self.ln(&inv), P, RM);
        to_f64(&b4.mul(&logs, P, RM))
    }

    fn lambda_big(&mut self, rho: f64, mu: f64) -> BigFloat {
        let r = big(rho);
        let lead = r.mul(&self.pi().sqrt(P, RM), P, RM).div(&big(4.0), P, RM);
        let q = r.mul(&r, P, RM).div(&big(64.0 * mu * mu), P, RM);
        lead.mul(&big(1.0).sub(&q, P, RM).sqrt(P, RM), P, RM)
    }

    pub fn lambda_rho(&mut self, rho: f64, mu: f64) -> f64 {
        to_f64(&self.lambda_big(rho, mu))
    }

    pub fn epsilon(&mut self, s: Shape, rho: f64) -> f64 {
        let lam = self.lambda_big(rho, s.mu).powi(s.m, P, RM);
        let denom = self.gamma_half(s.m).mul(&big(s.vol), P, RM);
        to_f64(&lam.div(&denom, P, RM).sqrt(P, RM))
    }

    pub fn d(&mut self, s: Shape, rho: f64) -> f64 {
        let r = big(rho);
        let q = r.mul(&r, P, RM).div(&big(s.mu * s.mu), P, RM);
        let frac = big(64.0).sub(&q, P, RM).div(&big(256.0).sub(&q, P, RM), P, RM);
        let frac = self.pow(&frac, &big(s.m as f64 / 2.0));
        let num = big(2.0)
            .powi(s.m, P, RM)
            .mul(&frac, P, RM)
            .mul(&self.gamma_half(s.m), P, RM)
            .mul(&big(s.vol), P, RM);
        let lam = self.lambda_big(rho, s.mu).powi(s.m, P, RM);
        to_f64(&self.ln(&num.div(&lam, P, RM)))
    }

    /// Unrounded c (d + ln(1/δ)) / ε².
    pub fn hanneke_rhs(&mut self, d: f64, eps: f64, delta: f64, c: f64) -> f64 {
        let inv = big(1.0).div(&big(delta), P, RM);
        let top = big(c).mul(&big(d).add(&self.ln(&inv), P, RM), P, RM);
        to_f64(&top.div(&big(eps).mul(&big(eps), P, RM), P, RM))
    }

    /// Unrounded ((|X| + |Δ|)/(|X|(1 − c) + 2|Δ|)) ln(|E|/δ).
    pub fn kappa_rhs(&mut self, x: u64, dl: u64, c: f64, e: u64, delta: f64) -> f64 {
        let (xb, db) = (big(x as f64), big(dl as f64));
        let num = xb.add(&db, P, RM);
        let den = xb
            .mul(&big(1.0).sub(&big(c), P, RM), P, RM)
            .add(&db.mul(&big(2.0), P, RM), P, RM);
        let l = self.ln(&big(e as f64).div(&big(delta), P, RM));
        to_f64(&num.div(&den, P, RM).mul(&l, P, RM))
    }

    fn one_minus_half_pow(k: u32) -> BigFloat {
        let h = big(1.0).div(&big(2.0).powi(k as usize, P, RM), P, RM);
        big(1.0).sub(&h, P, RM)
    }

    pub fn floor_at(&mut self, k: u32) -> f64 {
        to_f64(&Self::one_minus_half_pow(k))
    }

    pub fn ratio_upper(&mut self, n: u32) -> f64 {
        to_f64(&big(2.0).mul(&Self::one_minus_half_pow(n), P, RM))
    }

    fn shared(&mut self, n: u64, t: u64, e: u64, s_bar: f64) -> BigFloat {
        let nb = big(n as f64);
        let n2 = nb.mul(&nb, P, RM);
        let tb = big(t as f64);
        let select = n2.mul(&self.ln(&nb).add(&tb.mul(&tb, P, RM), P, RM), P, RM);
        let tail = big(1.0).sub(&big(1.0).div(&big(2.0).powi(n as usize, P, RM), P, RM), P, RM);
        let socrates = big(s_bar).mul(&nb, P, RM).mul(&big(e as f64), P, RM).mul(&tail, P, RM);
        select.add(&socrates, P, RM)
    }

    /// Counting bound with a linear training cost `T_f(n) = slope · n`.
    pub fn runtime_poly(&mut self, n: u64, t: u64, d: u64, e: u64, s_bar: f64, slope: f64) -> f64 {
        let nb = big(n as f64);
        let shrink = big(2.0).powi((n - 1) as usize, P, RM);
        let arg = big(d as f64).add(&big(e as f64).div(&shrink, P, RM), P, RM);
        let train = nb.mul(&nb, P, RM).mul(&big(slope).mul(&arg, P, RM), P, RM);
        to_f64(&self.shared(n, t, e, s_bar).add(&train, P, RM))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn runtime_sgd(&mut self, n: u64, t: u64, e: u64, s_bar: f64, f_bar: f64, b: u64, l: f64, g: f64, z: f64) -> f64 {
        let nb = big(n as f64);
        let lgz = big(l).mul(&big(g), P, RM).mul(&big(z), P, RM);
        let two_thirds = big(2.0).div(&big(3.0), P, RM);
        let scaled = big(b as f64).div(&self.pow(&lgz, &two_thirds), P, RM);
        let inner = big(e as f64).add(&scaled, P, RM);
        let train = nb.mul(&nb, P, RM).mul(&big(f_bar), P, RM).mul(&inner, P, RM);
        to_f64(&self.shared(n, t, e, s_bar).add(&train, P, RM))
    }
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

/// `n` points spread evenly over `[lo, hi]`, endpoints excluded.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}
