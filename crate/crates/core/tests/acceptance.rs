//! End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero
//! exit if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use agora::classifier::acc;
use agora::harness::suites::{self, SuiteOptions, SuiteReport, DEFAULT_NOISES};
use agora::harness::{run_experiment, ExperimentConfig};
use agora::models::{GradientModel, LogisticModel, MlpModel};
use agora::trainer::train_model;
use agora::{Classifier, Dataset, HyperparamSet, LabeledPoint, Seed};
use rand::Rng;

use common::fidelity::{all_formula_checks, range_rejections, TOLERANCE};

const FD_STEP: f64 = 1e-6;
const FD_TOLERANCE: f64 = 1e-6;
const FD_INSTANCES: usize = 100;
const DETERMINISM_WORKERS: [usize; 3] = [1, 4, 8];

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_report(r: SuiteReport) -> Outcome {
    Outcome {
        passed: r.passed(),
        detail: r
            .claims
            .iter()
            .map(|c| format!("[{}] {}: {}", if c.passed { "ok" } else { "miss" }, c.name, c.detail))
            .collect::<Vec<_>>()
            .join(" | "),
    }
}

fn suite_opts() -> SuiteOptions {
    SuiteOptions {
        trials: None,
        seed: 0,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

fn formula_fidelity() -> Outcome {
    let checks = all_formula_checks();
    let bad_formulas: Vec<_> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    let worst = checks.iter().map(|c| c.worst).fold(0.0f64, f64::max);
    let rejections = range_rejections();
    let accepted: Vec<_> = rejections.iter().filter(|(_, r)| !r).map(|(l, _)| *l).collect();
    Outcome {
        passed: bad_formulas.is_empty() && accepted.is_empty(),
        detail: format!(
            "{} formulas x 100 grid points, worst relative error {worst:.2e} (limit {TOLERANCE:e}), failing {bad_formulas:?}; \
             {}/{} out-of-range inputs rejected, accepted {accepted:?}",
            checks.len(),
            rejections.len() - accepted.len(),
            rejections.len()
        ),
    }
}

const DETERMINISM_CONFIG: &str = r#"{
    "manifold": {"shape": "sphere", "radius": 1.0},
    "data": {"d_size": 150, "e_size": 200, "d_representative": false},
    "tau": {"rho": 0.3},
    "socrates": {"noise_rate": 0.2},
    "timaeus": {"kind": "mlp", "hidden": 8},
    "theta": {"grid": {"eta": [0.02, 0.1, 0.4], "batch_size": [4, 16], "seed": [1, 2], "epochs": [3, 5]}},
    "master_seed": 11
}"#;

fn determinism() -> Outcome {
    let cfg = ExperimentConfig::from_json(DETERMINISM_CONFIG).expect("valid config");
    let traces: Vec<String> = DETERMINISM_WORKERS
        .iter()
        .map(|&w| run_experiment(&cfg, None, w).expect("run succeeds").agora.trace.to_csv())
        .collect();
    let repeat = run_experiment(&cfg, None, DETERMINISM_WORKERS[0]).expect("run succeeds").agora.trace.to_csv();
    let identical = traces.iter().all(|t| t.as_bytes() == traces[0].as_bytes()) && repeat == traces[0];
    Outcome {
        passed: identical,
        detail: format!(
            "workers {DETERMINISM_WORKERS:?} plus a repeat: {} trace bytes, {} rows, identical = {identical}",
            traces[0].len(),
            traces[0].lines().count() - 1
        ),
    }
}

fn central_difference<M: GradientModel + Clone>(model: &M, batch: &[&LabeledPoint]) -> Vec<f64> {
    let p = model.params();
    let mut probe = model.clone();
    (0..p.len())
        .map(|i| {
            let mut q = p.clone();
            q[i] = p[i] + FD_STEP;
            probe.set_params(&q);
            let up = probe.loss(batch);
            q[i] = p[i] - FD_STEP;
            probe.set_params(&q);
            let down = probe.loss(batch);
            (up - down) / (2.0 * FD_STEP)
        })
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// ‖analytic − numeric‖ / max(‖analytic‖, ‖numeric‖).
fn gradient_error<M: GradientModel + Clone>(model: &M, batch: &[&LabeledPoint]) -> f64 {
    let (_, analytic) = model.loss_grad(batch);
    let numeric = central_difference(model, batch);
    let diff: Vec<f64> = analytic.iter().zip(&numeric).map(|(a, n)| a - n).collect();
    norm(&diff) / norm(&analytic).max(norm(&numeric)).max(1e-300)
}

fn random_batch<R: Rng>(rng: &mut R, dim: usize) -> Vec<LabeledPoint> {
    let n = rng.random_range(1..=12);
    (0..n)
        .map(|_| {
            let x = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
            LabeledPoint::new(x, rng.random_range(0..=1)).unwrap()
        })
        .collect()
}

fn separable_benchmark() -> f64 {
    let mut rng = Seed::new(0).stream("separable").rng();
    let points = (0..200)
        .map(|i| {
            let mag = rng.random_range(0.5..3.0);
            if i % 2 == 0 {
                LabeledPoint::new(vec![mag], 1).unwrap()
            } else {
                LabeledPoint::new(vec![-mag], 0).unwrap()
            }
        })
        .collect();
    let d = Dataset::new("D", 1, points).unwrap();
    let theta = HyperparamSet::from_pairs(0, [("eta", "0.5"), ("batch_size", "16"), ("seed", "1"), ("epochs", "50")]).unwrap();
    let f = train_model(&Classifier::Logistic(LogisticModel::new(1)), &d, &theta).unwrap();
    acc(&f, &d, Seed::new(0)).unwrap()
}

fn gradients() -> Outcome {
    let mut rng = Seed::new(0).stream("gradient-check").rng();
    let mut worst_logistic = 0.0f64;
    let mut worst_mlp = 0.0f64;
    for i in 0..FD_INSTANCES {
        let dim = rng.random_range(1..=5);
        let batch = random_batch(&mut rng, dim);
        let refs: Vec<&LabeledPoint> = batch.iter().collect();

        let mut lr = LogisticModel::new(dim);
        let w: Vec<f64> = (0..=dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        lr.set_params(&w);
        worst_logistic = worst_logistic.max(gradient_error(&lr, &refs));

        let hidden = rng.random_range(1..=6);
        let mut mlp = MlpModel::initialized(dim, hidden, Seed::new(i as u64));
        let w: Vec<f64> = mlp.params().iter().map(|_| rng.random_range(-1.5..1.5)).collect();
        mlp.set_params(&w);
        worst_mlp = worst_mlp.max(gradient_error(&mlp, &refs));
    }
    let train_acc = separable_benchmark();
    Outcome {
        passed: worst_logistic <= FD_TOLERANCE && worst_mlp <= FD_TOLERANCE && train_acc == 1.0,
        detail: format!(
            "{FD_INSTANCES} instances, step {FD_STEP:e}: worst relative error logistic {worst_logistic:.2e}, \
             mlp {worst_mlp:.2e} (limit {FD_TOLERANCE:e}); separable 1-D benchmark training accuracy {train_acc}"
        ),
    }
}

fn main() -> ExitCode {
    let opts = suite_opts();
    let criteria: Vec<Criterion> = vec![
        ("per-iteration accuracy floor", Box::new(move || from_report(suites::lemma5(&opts, &DEFAULT_NOISES).unwrap()))),
        ("approximation ratio bracket", Box::new(move || from_report(suites::corollary1(&opts, &DEFAULT_NOISES).unwrap()))),
        ("dominance over single-shot training", Box::new(move || from_report(suites::theorem2(&opts, &DEFAULT_NOISES).unwrap()))),
        ("augmentation never lowers accuracy", Box::new(move || from_report(suites::lemma4(&opts).unwrap()))),
        ("sample-size cover", Box::new(move || from_report(suites::thm1(&opts).unwrap()))),
        ("perturbation-round cover", Box::new(move || from_report(suites::lemma3(&opts).unwrap()))),
        ("formula fidelity", Box::new(formula_fidelity)),
        ("runtime accounting", Box::new(move || from_report(suites::runtime(&opts).unwrap()))),
        ("determinism across worker counts", Box::new(determinism)),
        ("gradient correctness", Box::new(gradients)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name} ({:.1}s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
