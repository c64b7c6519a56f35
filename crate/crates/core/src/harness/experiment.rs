//! One configured experiment: data generation, the loop, the paired
//! enumeration baseline, and the run summary.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::agora::{enumerate_baseline, run_agora, AgoraInput, AgoraOutcome, BaselineOutcome, Executor};
use crate::bounds::{approx_ratio_bound, check_trace_against_bounds, per_iteration_floor, runtime_bound_poly, TraceCheck};
use crate::error::Result;
use crate::geometry::{sample_manifold, sample_region};
use crate::rng::Seed;
use crate::trainer::decode_theta;

use super::config::ExperimentConfig;

pub const WORKERS_ENV: &str = "AGORA_WORKERS";

/// Worker count: explicit value, else `AGORA_WORKERS`, else the config,
/// else 1.
pub fn resolve_workers(explicit: Option<usize>, config: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .or(config)
        .unwrap_or(1)
        .max(1)
}

/// Builds the loop input. D and E come from `master.stream("dataset")`.
pub fn build_input(cfg: &ExperimentConfig, master: Seed) -> Result<AgoraInput> {
    let v = cfg.validate()?;
    let data = master.stream("dataset");
    let d = if cfg.data.d_representative {
        sample_manifold(&v.spec, cfg.data.d_size, data.stream("d"))?
    } else {
        sample_region(&v.spec, cfg.data.d_size, cfg.data.d_region_fraction, data.stream("d"))?
    }
    .with_id("D");
    let e = sample_manifold(&v.spec, cfg.data.e_size, data.stream("e"))?.with_id("E");
    AgoraInput::new(v.timaeus, v.socrates, d, e, v.theta, v.tau, cfg.m_source, master)
}

#[derive(Debug, Clone, Serialize)]
pub struct FloorCheck {
    pub k: usize,
    pub incumbent_acc: f64,
    pub floor: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub master_seed: u64,
    pub theta_count: usize,
    pub iterations: usize,
    pub best_accuracy: f64,
    pub best_theta: usize,
    pub baseline_accuracy: f64,
    pub baseline_theta: usize,
    /// Agora accuracy over baseline accuracy; absent when the baseline is 0.
    pub ratio: Option<f64>,
    pub ratio_bracket: (f64, f64),
    pub ratio_in_bracket: Option<bool>,
    pub initial_d_size: usize,
    pub final_d_size: usize,
    pub e_size: usize,
    pub floors: Vec<FloorCheck>,
    pub runtime: TraceCheck,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub agora: AgoraOutcome,
    pub baseline: BaselineOutcome,
    pub summary: RunSummary,
}

/// Step-count model used in summaries: T_f(n) = (max epochs) · n, S̄ = 1.
pub fn poly_prediction(input: &AgoraInput) -> Result<crate::bounds::RuntimePrediction> {
    let max_epochs = input
        .theta
        .sets()
        .iter()
        .map(|s| decode_theta(s).map(|c| c.epochs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(1) as f64;
    runtime_bound_poly(
        input.theta.len() as u64,
        input.theta.max_set_size().max(1) as u64,
        input.d.len() as u64,
        input.e.len() as u64,
        1.0,
        &|n| max_epochs * n,
    )
}

pub fn run_input(input: &AgoraInput, exec: &Executor, runtime_constant: f64) -> Result<RunReport> {
    let agora = run_agora(input, exec)?;
    let baseline = enumerate_baseline(input, exec)?;
    let (lo, hi) = approx_ratio_bound(input.theta.len() as u32)?;
    let ratio = (baseline.best_acc > 0.0).then(|| agora.best_acc / baseline.best_acc);
    let floors = agora
        .trace
        .iterations
        .iter()
        .map(|it| {
            let floor = per_iteration_floor(it.k as u32)?;
            Ok(FloorCheck {
                k: it.k,
                incumbent_acc: it.incumbent_acc,
                floor,
                holds: it.incumbent_acc >= floor,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pred = poly_prediction(input)?;
    let runtime = check_trace_against_bounds(
        &agora.trace,
        &pred,
        runtime_constant,
        input.theta.len() as u64,
        input.e.len() as u64,
    );
    let summary = RunSummary {
        master_seed: input.master_seed.value(),
        theta_count: input.theta.len(),
        iterations: agora.trace.len(),
        best_accuracy: agora.best_acc,
        best_theta: agora.best_theta,
        baseline_accuracy: baseline.best_acc,
        baseline_theta: baseline.best_theta,
        ratio,
        ratio_bracket: (lo, hi),
        ratio_in_bracket: ratio.map(|r| r >= lo - 1e-12 && r <= hi),
        initial_d_size: input.d.len(),
        final_d_size: agora.d.len(),
        e_size: input.e.len(),
        floors,
        runtime,
    };
    Ok(RunReport {
        agora,
        baseline,
        summary,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig, seed_override: Option<u64>, workers: usize) -> Result<RunReport> {
    let input = build_input(cfg, Seed::new(seed_override.unwrap_or(cfg.master_seed)))?;
    run_input(&input, &Executor::new(workers)?, cfg.runtime_constant)
}

/// `<dir>/<stem>.summary.json` next to a trace path.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
    out.with_file_name(format!("{stem}.summary.json"))
}

/// Writes the trace CSV to `out` and the summary JSON beside it.
pub fn write_outputs(report: &RunReport, out: &Path) -> Result<PathBuf> {
    report.agora.trace.save_csv(out)?;
    let path = summary_path(out);
    std::fs::write(&path, serde_json::to_string_pretty(&report.summary)? + "\n")?;
    Ok(path)
}
