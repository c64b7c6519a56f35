//! Named Monte Carlo verification suites. Each suite runs a fixed protocol
//! over seeded trials and reports pass/fail per claim with the measured
//! statistics. Trial `t` of suite `s` uses `Seed::new(seed).stream(s).index(t)`.

use serde::Serialize;

use crate::agora::{AgoraInput, Executor, MSource};
use crate::bounds::{approx_ratio_bound, per_iteration_floor, runtime_bound_sgd, sgd_summary, RuntimePrediction};
use crate::classifier::{acc, Classifier};
use crate::data::LabeledPoint;
use crate::error::{Error, Result};
use crate::geometry::{cover_check, niyogi_smale_n, sample_manifold, sample_region, BoundsReport, KappaParams, ManifoldSpec};
use crate::hyper::{HyperparamSet, HyperparamSpace};
use crate::models::{BallMemoryClassifier, LogisticModel, OracleSocrates};
use crate::rng::Seed;
use crate::tau::{build_m, generate_e_tilde, TauFunction};
use crate::trainer::{decode_theta, train_model};

use super::experiment::{poly_prediction, run_input, RunReport};

pub const SUITES: [&str; 7] = ["lemma5", "theorem2", "corollary1", "lemma3", "lemma4", "thm1", "runtime"];

/// Mesh density used by every cover check in the suites.
pub const COVER_MESH: usize = 2000;

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub claims: Vec<Claim>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Overrides the suite's default trial count.
    pub trials: Option<usize>,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            trials: None,
            seed: 0,
            workers: 1,
        }
    }
}

impl SuiteOptions {
    fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default).max(1)
    }

    fn trial_seed(&self, suite: &str, t: usize) -> Seed {
        Seed::new(self.seed).stream(suite).index(t as u64)
    }
}

/// Lower end of a 3σ binomial band around `p` for `n` trials.
pub fn binomial_floor(p: f64, n: usize) -> f64 {
    p - 3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

/// The idealized setting: perfect-memory learner, faithful τ, teacher with
/// the given noise, training data from half the unit circle, evaluation
/// data from all of it, and pairwise-disjoint hyperparameter sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealizedSetup {
    pub rho: f64,
    pub d_size: usize,
    pub e_size: usize,
    pub region_fraction: f64,
    pub theta_count: usize,
    pub noise_rate: f64,
    pub timaeus: TimaeusChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimaeusChoice {
    BallMemory,
    Logistic,
}

impl Default for IdealizedSetup {
    fn default() -> Self {
        IdealizedSetup {
            rho: 0.2,
            d_size: 100,
            e_size: 200,
            region_fraction: 0.5,
            theta_count: 5,
            noise_rate: 0.0,
            timaeus: TimaeusChoice::BallMemory,
        }
    }
}

impl IdealizedSetup {
    pub fn with_noise(self, noise_rate: f64) -> Self {
        IdealizedSetup { noise_rate, ..self }
    }

    /// Set `i` holds `eta = (i+1)/100`, `batch_size = seed = epochs = i+1`.
    pub fn theta_space(&self) -> Result<HyperparamSpace> {
        let sets = (0..self.theta_count)
            .map(|i| {
                let v = (i + 1).to_string();
                HyperparamSet::from_pairs(
                    i,
                    [
                        ("eta", format!("{}", (i + 1) as f64 / 100.0)),
                        ("batch_size", v.clone()),
                        ("seed", v.clone()),
                        ("epochs", v),
                    ],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        HyperparamSpace::new(sets)
    }

    pub fn spec(&self) -> ManifoldSpec {
        ManifoldSpec::circle(1.0).expect("unit circle is valid")
    }

    pub fn input(&self, master: Seed) -> Result<AgoraInput> {
        let spec = self.spec();
        let data = master.stream("dataset");
        let d = sample_region(&spec, self.d_size, self.region_fraction, data.stream("d"))?.with_id("D");
        let e = sample_manifold(&spec, self.e_size, data.stream("e"))?.with_id("E");
        let tau = TauFunction::faithful(self.rho, spec.clone())?;
        let timaeus = match self.timaeus {
            TimaeusChoice::BallMemory => Classifier::BallMemory(BallMemoryClassifier::new(2, tau.radius())?),
            TimaeusChoice::Logistic => Classifier::Logistic(LogisticModel::new(2)),
        };
        AgoraInput::new(
            timaeus,
            Classifier::Oracle(OracleSocrates::new(spec, self.noise_rate)?),
            d,
            e,
            self.theta_space()?,
            tau,
            MSource::Incumbent,
            master,
        )
    }
}

/// Runs the idealized setting over `trials` seeds from `stream`.
pub fn idealized_runs(setup: &IdealizedSetup, opts: &SuiteOptions, stream: &str, trials: usize) -> Result<Vec<RunReport>> {
    let exec = Executor::new(opts.workers)?;
    let inner = Executor::sequential();
    let idx: Vec<usize> = (0..trials).collect();
    exec.map(&idx, |&t| {
        let input = setup.input(opts.trial_seed(stream, t))?;
        run_input(&input, &inner, 1.0)
    })
    .into_iter()
    .collect()
}

fn noise_label(q: f64) -> String {
    if q == 0.0 {
        "noise=0".into()
    } else if (q - 1.0 / 3.0).abs() < 1e-15 {
        "noise=1/3".into()
    } else {
        format!("noise={q}")
    }
}

pub const DEFAULT_NOISES: [f64; 2] = [0.0, 1.0 / 3.0];

/// Incumbent accuracy after iteration k ≥ 1 − 2^{−k} in ≥ 95% of runs, for
/// every k reached.
pub fn lemma5(opts: &SuiteOptions, noises: &[f64]) -> Result<SuiteReport> {
    let trials = opts.trials_or(50);
    let mut claims = Vec::new();
    for &q in noises {
        let setup = IdealizedSetup::default().with_noise(q);
        let runs = idealized_runs(&setup, opts, &format!("lemma5/{q}"), trials)?;
        let max_k = runs.iter().map(|r| r.agora.trace.len()).max().unwrap_or(0);
        let mut parts = Vec::new();
        let mut ok = true;
        for k in 1..=max_k {
            let floor = per_iteration_floor(k as u32)?;
            let reached: Vec<f64> = runs
                .iter()
                .filter_map(|r| r.agora.trace.iterations.get(k - 1).map(|it| it.incumbent_acc))
                .collect();
            let hits = reached.iter().filter(|&&a| a >= floor).count();
            let frac = hits as f64 / reached.len() as f64;
            let min = reached.iter().copied().fold(f64::INFINITY, f64::min);
            ok &= frac >= 0.95;
            parts.push(format!("k={k}: {hits}/{} ≥ {floor} (min {min:.3})", reached.len()));
        }
        claims.push(Claim {
            name: format!("incumbent floor 1-2^-k, {}", noise_label(q)),
            passed: ok,
            detail: parts.join("; "),
        });
    }
    Ok(SuiteReport {
        suite: "lemma5".into(),
        claims,
    })
}

/// r = acc_agora / acc_enum within [1, 2(1 − 2^{−|Θ|})] in every run.
pub fn corollary1(opts: &SuiteOptions, noises: &[f64]) -> Result<SuiteReport> {
    let trials = opts.trials_or(50);
    let mut claims = Vec::new();
    for &q in noises {
        let setup = IdealizedSetup::default().with_noise(q);
        let (lo, hi) = approx_ratio_bound(setup.theta_count as u32)?;
        let runs = idealized_runs(&setup, opts, &format!("corollary1/{q}"), trials)?;
        let ratios: Vec<f64> = runs.iter().filter_map(|r| r.summary.ratio).collect();
        let inside = ratios.iter().filter(|&&r| r >= lo - 1e-12 && r <= hi).count();
        let (rmin, rmax) = ratios
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
        claims.push(Claim {
            name: format!("ratio in [1, {hi}], {}", noise_label(q)),
            passed: inside == runs.len(),
            detail: format!("{inside}/{} inside; r ∈ [{rmin:.4}, {rmax:.4}]", runs.len()),
        });
    }
    Ok(SuiteReport {
        suite: "corollary1".into(),
        claims,
    })
}

/// acc_agora ≥ every single-shot accuracy; required in all noiseless runs
/// and ≥ 95% of noisy ones.
pub fn theorem2(opts: &SuiteOptions, noises: &[f64]) -> Result<SuiteReport> {
    let trials = opts.trials_or(50);
    let mut claims = Vec::new();
    for &q in noises {
        let setup = IdealizedSetup::default().with_noise(q);
        let runs = idealized_runs(&setup, opts, &format!("theorem2/{q}"), trials)?;
        let wins = runs
            .iter()
            .filter(|r| r.baseline.accuracies.iter().all(|&(_, a)| r.agora.best_acc >= a))
            .count();
        let frac = wins as f64 / runs.len() as f64;
        let need = if q == 0.0 { 1.0 } else { 0.95 };
        claims.push(Claim {
            name: format!("dominates every single-shot set, {}", noise_label(q)),
            passed: frac >= need,
            detail: format!("{wins}/{} runs (need {need})", runs.len()),
        });
    }
    Ok(SuiteReport {
        suite: "theorem2".into(),
        claims,
    })
}

/// One augment-and-retrain round with an exact teacher never lowers accuracy.
pub fn lemma4(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials_or(50);
    let setup = IdealizedSetup::default();
    let theta = setup.theta_space()?.sets()[0].clone();
    let exec = Executor::new(opts.workers)?;
    let idx: Vec<usize> = (0..trials).collect();
    let outcomes = exec
        .map(&idx, |&t| -> Result<(f64, f64)> {
            let input = setup.input(opts.trial_seed("lemma4", t))?;
            let eval = input.eval_seed();
            let f = train_model(&input.timaeus, &input.d, &theta)?;
            let before = acc(&f, &input.e, eval)?;
            let m = build_m(&f, &input.e, &input.tau, eval, input.master_seed.stream("tau"))?;
            let oracle = Classifier::Oracle(OracleSocrates::exact(setup.spec()));
            let labeled = m
                .points
                .iter()
                .map(|x| LabeledPoint::new(x.clone(), oracle.predict(x, Seed::new(0))?))
                .collect::<Result<Vec<_>>>()?;
            let d2 = input.d.union_dedup(labeled)?;
            let f2 = train_model(&input.timaeus, &d2, &theta)?;
            Ok((before, acc(&f2, &input.e, eval)?))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let ok = outcomes.iter().filter(|(b, a)| a >= b).count();
    let gain = outcomes.iter().map(|(b, a)| a - b).sum::<f64>() / outcomes.len() as f64;
    Ok(SuiteReport {
        suite: "lemma4".into(),
        claims: vec![Claim {
            name: "accuracy does not decrease after augmentation".into(),
            passed: ok == outcomes.len(),
            detail: format!("{ok}/{} runs; mean gain {gain:.4}", outcomes.len()),
        }],
    })
}

fn cover_fraction(opts: &SuiteOptions, suite: &str, trials: usize, f: impl Fn(Seed) -> Result<bool> + Sync + Send) -> Result<(usize, usize)> {
    let exec = Executor::new(opts.workers)?;
    let idx: Vec<usize> = (0..trials).collect();
    let hits = exec
        .map(&idx, |&t| f(opts.trial_seed(suite, t)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok((hits, trials))
}

pub const COVER_RHO: f64 = 0.2;
pub const COVER_DELTA: f64 = 0.1;

/// A sample of the sample-size bound is ρ/2-dense in ≥ (1 − δ) − 3σ of trials.
pub fn thm1(opts: &SuiteOptions) -> Result<SuiteReport> {
    let spec = ManifoldSpec::circle(1.0)?;
    let n = niyogi_smale_n(&spec, COVER_RHO, COVER_DELTA)? as usize;
    let trials = opts.trials_or(200);
    let (hits, trials) = cover_fraction(opts, "thm1", trials, |s| {
        let d = sample_manifold(&spec, n, s)?;
        let pts: Vec<Vec<f64>> = d.iter().map(|p| p.x.clone()).collect();
        Ok(cover_check(&pts, &spec, COVER_RHO / 2.0, COVER_MESH)?.covered)
    })?;
    let need = binomial_floor(1.0 - COVER_DELTA, trials);
    let frac = hits as f64 / trials as f64;
    Ok(SuiteReport {
        suite: "thm1".into(),
        claims: vec![Claim {
            name: format!("n={n} samples cover at radius ρ/2"),
            passed: frac >= need,
            detail: format!("{hits}/{trials} = {frac:.3} (need ≥ {need:.3})"),
        }],
    })
}

/// κ rounds of faithful τ over E are ρ/2-dense in ≥ (1 − δ) − 3σ of trials.
pub fn lemma3(opts: &SuiteOptions) -> Result<SuiteReport> {
    let spec = ManifoldSpec::circle(1.0)?;
    let report = BoundsReport::compute(&spec, COVER_RHO, COVER_DELTA, KappaParams::default())?;
    let (n, kappa) = (report.n_min as usize, report.kappa_min);
    let tau = TauFunction::faithful(COVER_RHO, spec.clone())?;
    let trials = opts.trials_or(100);
    let (hits, trials) = cover_fraction(opts, "lemma3", trials, |s| {
        let e = sample_manifold(&spec, n, s.stream("e"))?;
        let tilde = generate_e_tilde(&e, &tau, kappa, s.stream("tau"))?;
        Ok(cover_check(&tilde, &spec, COVER_RHO / 2.0, COVER_MESH)?.covered)
    })?;
    let need = binomial_floor(1.0 - COVER_DELTA, trials);
    let frac = hits as f64 / trials as f64;
    Ok(SuiteReport {
        suite: "lemma3".into(),
        claims: vec![Claim {
            name: format!("κ={kappa} perturbation rounds of |E|={n} cover at radius ρ/2"),
            passed: frac >= need,
            detail: format!("{hits}/{trials} = {frac:.3} (need ≥ {need:.3})"),
        }],
    })
}

/// Nearest-rank percentile of a nonempty sample.
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((p * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

pub const CALIBRATION_PER_TRIAL: usize = 40;

/// Smallest multiple of 0.25 at or above every measured/predicted ratio.
pub fn fit_constant(ratios: &[f64]) -> f64 {
    let worst = ratios.iter().copied().fold(0.0f64, f64::max);
    ((worst * 4.0).ceil() / 4.0).max(0.25)
}

fn total_steps(r: &RunReport) -> f64 {
    (r.agora.trace.total_train_steps() + r.agora.trace.total_socrates_calls()) as f64
}

fn sgd_prediction(input: &AgoraInput) -> Result<RuntimePrediction> {
    let (zeta, batch, l, g) = sgd_summary(&input.theta)?;
    let f_bar = input
        .theta
        .sets()
        .iter()
        .map(|s| decode_theta(s).map(|c| c.epochs as f64))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(1.0, f64::max);
    runtime_bound_sgd(
        input.theta.len() as u64,
        input.theta.max_set_size() as u64,
        input.e.len() as u64,
        1.0,
        f_bar,
        batch,
        l,
        g,
        zeta,
    )
}

/// Step accounting against the counting bound, the M-size schedule, and a
/// single fitted constant for each runtime bound.
pub fn runtime(opts: &SuiteOptions) -> Result<SuiteReport> {
    let trials = opts.trials_or(50);
    // a new run exceeds the max of m exchangeable calibration runs with
    // probability 1/(m+1); 40 per trial keeps the suite-wide miss rate near 2.5%
    let calibration = CALIBRATION_PER_TRIAL * trials;
    let setup = IdealizedSetup::default();
    let mut claims = Vec::new();

    let runs = idealized_runs(&setup, opts, "runtime", trials)?;
    let cap = (setup.theta_count * setup.e_size) as u64;
    let within = runs.iter().filter(|r| r.agora.trace.total_socrates_calls() <= cap).count();
    let max_calls = runs.iter().map(|r| r.agora.trace.total_socrates_calls()).max().unwrap_or(0);
    claims.push(Claim {
        name: "socrates_calls ≤ |Θ|·|E|".into(),
        passed: within == runs.len(),
        detail: format!("{within}/{} runs; max {max_calls} ≤ {cap}", runs.len()),
    });

    let max_k = runs.iter().map(|r| r.agora.trace.len()).max().unwrap_or(0);
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 1..=max_k {
        let sizes: Vec<f64> = runs
            .iter()
            .filter_map(|r| r.agora.trace.iterations.get(k - 1).map(|it| it.m_size as f64))
            .collect();
        let p95 = percentile(&sizes, 0.95);
        let allowed = setup.e_size as f64 / 2f64.powi(k as i32 - 1);
        ok &= p95 <= allowed;
        parts.push(format!("k={k}: p95 {p95} ≤ {allowed}"));
    }
    claims.push(Claim {
        name: "|M^(k)| ≤ |E|/2^(k-1) at the 95th percentile".into(),
        passed: ok,
        detail: parts.join("; "),
    });

    // constant fitted on separate calibration seeds, then checked on the trial runs
    let poly_ratio = |r: &RunReport, input: &AgoraInput| -> Result<f64> {
        Ok(total_steps(r) / poly_prediction(input)?.total_steps_bound)
    };
    let calib = idealized_runs(&setup, opts, "runtime/calibration", calibration)?;
    let calib_ratios = (0..calibration)
        .map(|t| poly_ratio(&calib[t], &setup.input(opts.trial_seed("runtime/calibration", t))?))
        .collect::<Result<Vec<_>>>()?;
    let c = fit_constant(&calib_ratios);
    let ratios = (0..trials)
        .map(|t| poly_ratio(&runs[t], &setup.input(opts.trial_seed("runtime", t))?))
        .collect::<Result<Vec<_>>>()?;
    let held = ratios.iter().filter(|&&x| x <= c).count();
    let worst = ratios.iter().copied().fold(0.0f64, f64::max);
    claims.push(Claim {
        name: "total steps ≤ C · counting bound (T_f(n) = max_epochs·n)".into(),
        passed: held == ratios.len(),
        detail: format!("C = {c}; {held}/{} runs; worst measured/bound {worst:.4}", ratios.len()),
    });

    let sgd_setup = IdealizedSetup {
        timaeus: TimaeusChoice::Logistic,
        ..setup
    };
    let sgd_ratio = |stream: &str, t: usize| -> Result<f64> {
        let input = sgd_setup.input(opts.trial_seed(stream, t))?;
        let r = run_input(&input, &Executor::sequential(), 1.0)?;
        Ok(total_steps(&r) / sgd_prediction(&input)?.total_steps_bound)
    };
    let exec = Executor::new(opts.workers)?;
    let cal_idx: Vec<usize> = (0..calibration).collect();
    let c_sgd = fit_constant(
        &exec
            .map(&cal_idx, |&t| sgd_ratio("runtime/sgd-calibration", t))
            .into_iter()
            .collect::<Result<Vec<_>>>()?,
    );
    let idx: Vec<usize> = (0..trials).collect();
    let sgd_ratios = exec
        .map(&idx, |&t| sgd_ratio("runtime/sgd", t))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let held = sgd_ratios.iter().filter(|&&x| x <= c_sgd).count();
    let worst = sgd_ratios.iter().copied().fold(0.0f64, f64::max);
    claims.push(Claim {
        name: "logistic total steps ≤ C · SGD bound (f̄ = max epochs)".into(),
        passed: held == sgd_ratios.len(),
        detail: format!("C = {c_sgd}; {held}/{} runs; worst measured/bound {worst:.4}", sgd_ratios.len()),
    });

    Ok(SuiteReport {
        suite: "runtime".into(),
        claims,
    })
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "lemma5" => lemma5(opts, &DEFAULT_NOISES),
        "theorem2" => theorem2(opts, &DEFAULT_NOISES),
        "corollary1" => corollary1(opts, &DEFAULT_NOISES),
        "lemma3" => lemma3(opts),
        "lemma4" => lemma4(opts),
        "thm1" => thm1(opts),
        "runtime" => runtime(opts),
        other => Err(Error::config(
            "suite",
            format!("unknown suite `{other}`; valid suites: {}", SUITES.join(", ")),
        )),
    }
}
