//! Closed-form predictions about the loop itself (accuracy floor,
//! approximation ratio, step-count bounds) and their comparison with a
//! recorded trace.
//!
//! Asymptotic bounds are evaluated with leading constant 1 and natural
//! logarithms; a trace is compared against `C` times the bound for an
//! explicitly supplied constant `C`.

use serde::{Deserialize, Serialize};

use crate::agora::RunTrace;
use crate::error::{Error, Result};
use crate::hyper::HyperparamSpace;
use crate::trainer::decode_theta;

/// Lower bound on incumbent accuracy after iteration `k`: 1 − 2^{−k}.
pub fn per_iteration_floor(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::range("iteration k must be ≥ 1"));
    }
    Ok(1.0 - 0.5f64.powi(k as i32))
}

/// `(1, 2(1 − 2^{−n}))` for `n` hyperparameter sets.
pub fn approx_ratio_bound(theta_count: u32) -> Result<(f64, f64)> {
    if theta_count == 0 {
        return Err(Error::range("theta_count must be ≥ 1"));
    }
    Ok((1.0, 2.0 * (1.0 - 0.5f64.powi(theta_count as i32))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum RuntimeInputs {
    Poly {
        theta_count: u64,
        theta_size: u64,
        d_size: u64,
        e_size: u64,
        s_bar: f64,
        /// `T_f` evaluated at its argument.
        t_f_argument: f64,
        t_f_value: f64,
    },
    Sgd {
        theta_count: u64,
        theta_size: u64,
        e_size: u64,
        s_bar: f64,
        f_bar: f64,
        batch_max: u64,
        lipschitz: f64,
        grad_bound: f64,
        zeta: f64,
    },
}

/// A step-count bound split into its three terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimePrediction {
    pub total_steps_bound: f64,
    /// |Θ|² × (training cost).
    pub train_term: f64,
    /// |Θ|² (ln|Θ| + |θ|²): sorting and atom selection.
    pub select_term: f64,
    /// S̄ |Θ| |E| (1 − 2^{−|Θ|}): teacher labelling.
    pub socrates_term: f64,
    pub inputs: RuntimeInputs,
}

fn at_least_one(name: &str, v: u64) -> Result<f64> {
    if v >= 1 {
        Ok(v as f64)
    } else {
        Err(Error::range(format!("{name} must be ≥ 1")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::range(format!("{name} must be finite and ≥ 0")))
    }
}

fn strictly_positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::range(format!("{name} must be finite and > 0")))
    }
}

fn shared_terms(theta_count: f64, theta_size: f64, e_size: f64, s_bar: f64) -> (f64, f64) {
    let select = theta_count * theta_count * (theta_count.ln() + theta_size * theta_size);
    let socrates = s_bar * theta_count * e_size * (1.0 - 0.5f64.powf(theta_count));
    (select, socrates)
}

/// |Θ|²(ln|Θ| + |θ|² + T_f(|D| + |E|/2^{|Θ|−1})) + S̄|Θ||E|(1 − 2^{−|Θ|}).
pub fn runtime_bound_poly(
    theta_count: u64,
    theta_size: u64,
    d_size: u64,
    e_size: u64,
    s_bar: f64,
    t_f: &dyn Fn(f64) -> f64,
) -> Result<RuntimePrediction> {
    let n = at_least_one("theta_count", theta_count)?;
    let t = at_least_one("theta_size", theta_size)?;
    let d = at_least_one("d_size", d_size)?;
    let e = at_least_one("e_size", e_size)?;
    let s_bar = non_negative("s_bar", s_bar)?;
    let arg = d + e / 2f64.powf(n - 1.0);
    let t_f_value = non_negative("T_f value", t_f(arg))?;
    let (select_term, socrates_term) = shared_terms(n, t, e, s_bar);
    let train_term = n * n * t_f_value;
    Ok(RuntimePrediction {
        total_steps_bound: select_term + train_term + socrates_term,
        train_term,
        select_term,
        socrates_term,
        inputs: RuntimeInputs::Poly {
            theta_count,
            theta_size,
            d_size,
            e_size,
            s_bar,
            t_f_argument: arg,
            t_f_value,
        },
    })
}

/// [`runtime_bound_poly`] with `T_f` replaced by f̄(|E| + |B|/(LGζ)^{2/3}).
#[allow(clippy::too_many_arguments)]
pub fn runtime_bound_sgd(
    theta_count: u64,
    theta_size: u64,
    e_size: u64,
    s_bar: f64,
    f_bar: f64,
    batch_max: u64,
    lipschitz: f64,
    grad_bound: f64,
    zeta: f64,
) -> Result<RuntimePrediction> {
    let n = at_least_one("theta_count", theta_count)?;
    let t = at_least_one("theta_size", theta_size)?;
    let e = at_least_one("e_size", e_size)?;
    let b = at_least_one("batch_max", batch_max)?;
    let s_bar = non_negative("s_bar", s_bar)?;
    let f_bar = non_negative("f_bar", f_bar)?;
    let l = strictly_positive("lipschitz", lipschitz)?;
    let g = strictly_positive("grad_bound", grad_bound)?;
    let z = strictly_positive("zeta", zeta)?;
    let (select_term, socrates_term) = shared_terms(n, t, e, s_bar);
    let train_term = n * n * f_bar * (e + b / (l * g * z).powf(2.0 / 3.0));
    Ok(RuntimePrediction {
        total_steps_bound: select_term + train_term + socrates_term,
        train_term,
        select_term,
        socrates_term,
        inputs: RuntimeInputs::Sgd {
            theta_count,
            theta_size,
            e_size,
            s_bar,
            f_bar,
            batch_max,
            lipschitz,
            grad_bound,
            zeta,
        },
    })
}

/// Optimizer quantities of a space: `(ζ = min η², max |B|, max L, max G)`.
pub fn sgd_summary(theta: &HyperparamSpace) -> Result<(f64, u64, f64, f64)> {
    let mut zeta = f64::INFINITY;
    let mut batch = 0u64;
    let mut l = 0.0f64;
    let mut g = 0.0f64;
    for s in theta.sets() {
        let c = decode_theta(s)?;
        zeta = zeta.min(c.eta * c.eta);
        batch = batch.max(c.batch_size as u64);
        l = l.max(c.lipschitz);
        g = g.max(c.grad_bound);
    }
    if theta.is_empty() {
        return Err(Error::range("hyperparameter space is empty"));
    }
    Ok((zeta, batch, l, g))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MScheduleEntry {
    pub k: usize,
    pub m_size: usize,
    /// |E| / 2^{k−1}.
    pub allowed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    pub measured_train_steps: u64,
    pub measured_socrates_calls: u64,
    pub measured_total: u64,
    pub constant: f64,
    pub scaled_bound: f64,
    pub within_bound: bool,
    /// Teacher calls never exceed |Θ|·|E|.
    pub socrates_within_count: bool,
    pub m_schedule: Vec<MScheduleEntry>,
}

/// Compares measured step counts with `c` times the predicted bound.
pub fn check_trace_against_bounds(
    trace: &RunTrace,
    pred: &RuntimePrediction,
    c: f64,
    theta_count: u64,
    e_size: u64,
) -> TraceCheck {
    let train = trace.total_train_steps();
    let soc = trace.total_socrates_calls();
    let total = train + soc;
    let scaled = c * pred.total_steps_bound;
    TraceCheck {
        measured_train_steps: train,
        measured_socrates_calls: soc,
        measured_total: total,
        constant: c,
        scaled_bound: scaled,
        within_bound: (total as f64) <= scaled,
        socrates_within_count: soc <= theta_count * e_size,
        m_schedule: trace
            .iterations
            .iter()
            .map(|it| MScheduleEntry {
                k: it.k,
                m_size: it.m_size,
                allowed: e_size as f64 / 2f64.powi(it.k as i32 - 1),
            })
            .collect(),
    }
}
