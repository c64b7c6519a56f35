use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use agora::bounds::{runtime_bound_poly, runtime_bound_sgd};
use agora::geometry::{sample_manifold, sample_region, BoundsReport, KappaParams, ManifoldSpec, Shape};
use agora::harness::{self, ExperimentConfig, SuiteOptions};
use agora::{Error, Seed};

const EXIT_INVALID: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "agora", version, about = "Train/augment/prune hyperparameter search with bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the loop and the enumeration baseline from a JSON config.
    Run {
        /// Experiment configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Trace CSV path; the summary goes to `<stem>.summary.json` beside it.
        #[arg(long)]
        out: PathBuf,
        /// Replaces the config's master_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Parallel workers (default: AGORA_WORKERS, then the config, then 1).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print geometric bounds (and optionally a step-count bound) as JSON.
    Bounds(BoundsArgs),
    /// Sample a labeled dataset from a manifold into CSV.
    Datagen {
        #[command(flatten)]
        manifold: ManifoldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw from a connected region covering this share of the manifold.
        #[arg(long)]
        region_fraction: Option<f64>,
    },
    /// Run a named verification suite.
    Verify {
        /// One of lemma5, theorem2, corollary1, lemma3, lemma4, thm1, runtime.
        #[arg(long)]
        suite: String,
        /// Trial count (default: the suite's own).
        #[arg(long)]
        trials: Option<usize>,
        /// Master seed for the suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Parallel workers (default: AGORA_WORKERS, then 1).
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Circle,
    Sphere,
    Segment,
}

#[derive(Args)]
struct ManifoldArgs {
    #[arg(long, value_enum)]
    manifold: ShapeArg,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    ambient_dim: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    positive_fraction: f64,
    #[arg(long)]
    mu_cap: Option<f64>,
}

impl ManifoldArgs {
    fn spec(&self) -> agora::Result<ManifoldSpec> {
        let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Error::Range(format!("--{flag} is required for this manifold")));
        let (shape, natural) = match self.manifold {
            ShapeArg::Circle => (Shape::Circle { radius: need(self.radius, "radius")? }, 2),
            ShapeArg::Sphere => (Shape::Sphere { radius: need(self.radius, "radius")? }, 3),
            ShapeArg::Segment => (Shape::Segment { length: need(self.length, "length")? }, 1),
        };
        let mut spec = ManifoldSpec::new(shape, self.ambient_dim.unwrap_or(natural), self.positive_fraction)?;
        if let Some(c) = self.mu_cap {
            spec = spec.with_mu_cap(c)?;
        }
        Ok(spec)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuntimeModel {
    Poly,
    Sgd,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    #[arg(long)]
    rho: f64,
    #[arg(long)]
    delta: f64,
    /// Share c of the support covered by E ∪ Δ in the κ bound.
    #[arg(long, default_value_t = 0.5)]
    c_frac: f64,
    #[arg(long, default_value_t = 0)]
    delta_size: u64,
    /// |X| in the κ bound; defaults to ⌈(n_min + |Δ|)/c⌉.
    #[arg(long)]
    support_size: Option<u64>,
    /// Also print a step-count bound.
    #[arg(long, value_enum)]
    runtime: Option<RuntimeModel>,
    #[arg(long, default_value_t = 1)]
    theta_count: u64,
    #[arg(long, default_value_t = 1)]
    theta_size: u64,
    #[arg(long, default_value_t = 1)]
    d_size: u64,
    #[arg(long, default_value_t = 1)]
    e_size: u64,
    #[arg(long, default_value_t = 1.0)]
    s_bar: f64,
    /// Poly model: T_f(n) = t_f_scale · n.
    #[arg(long, default_value_t = 1.0)]
    t_f_scale: f64,
    #[arg(long, default_value_t = 1.0)]
    f_bar: f64,
    #[arg(long, default_value_t = 1)]
    batch_max: u64,
    #[arg(long, default_value_t = 0.25)]
    lipschitz: f64,
    #[arg(long, default_value_t = 1.0)]
    grad_bound: f64,
    #[arg(long, default_value_t = 1.0)]
    zeta: f64,
}

fn fail(code: u8, e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(code)
}

fn cmd_run(config: PathBuf, out: PathBuf, seed: Option<u64>, workers: Option<usize>) -> ExitCode {
    let cfg = match ExperimentConfig::load(&config).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_INVALID, e),
    };
    let workers = harness::resolve_workers(workers, cfg.parallel_workers);
    let report = match harness::run_experiment(&cfg, seed, workers) {
        Ok(r) => r,
        Err(e) => return fail(EXIT_RUNTIME, e),
    };
    match harness::write_outputs(&report, &out) {
        Ok(summary) => {
            let s = &report.summary;
            println!(
                "iterations={} best_accuracy={} baseline_accuracy={} ratio={} trace={} summary={}",
                s.iterations,
                s.best_accuracy,
                s.baseline_accuracy,
                s.ratio.map_or("null".to_string(), |r| r.to_string()),
                out.display(),
                summary.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_RUNTIME, e),
    }
}

fn cmd_bounds(a: BoundsArgs) -> ExitCode {
    let result = (|| -> agora::Result<()> {
        let spec = a.manifold.spec()?;
        let kappa = KappaParams {
            c_frac: a.c_frac,
            delta_size: a.delta_size,
            support_size: a.support_size,
        };
        let report = BoundsReport::compute(&spec, a.rho, a.delta, kappa)?;
        let pred = match a.runtime {
            None => None,
            Some(RuntimeModel::Poly) => {
                let scale = a.t_f_scale;
                Some(runtime_bound_poly(a.theta_count, a.theta_size, a.d_size, a.e_size, a.s_bar, &|n| scale * n)?)
            }
            Some(RuntimeModel::Sgd) => Some(runtime_bound_sgd(
                a.theta_count,
                a.theta_size,
                a.e_size,
                a.s_bar,
                a.f_bar,
                a.batch_max,
                a.lipschitz,
                a.grad_bound,
                a.zeta,
            )?),
        };
        println!("{}", serde_json::to_string(&report)?);
        if let Some(p) = pred {
            println!("{}", serde_json::to_string(&p)?);
        }
        Ok(())
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_INVALID, e),
    }
}

fn cmd_datagen(m: ManifoldArgs, n: usize, out: PathBuf, seed: u64, region: Option<f64>) -> ExitCode {
    let data = (|| {
        let spec = m.spec()?;
        match region {
            Some(f) => sample_region(&spec, n, f, Seed::new(seed)),
            None => sample_manifold(&spec, n, Seed::new(seed)),
        }
    })();
    match data {
        Ok(d) => match d.save(&out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(EXIT_RUNTIME, e),
        },
        Err(e) => fail(EXIT_INVALID, e),
    }
}

fn cmd_verify(suite: String, trials: Option<usize>, seed: u64, workers: Option<usize>) -> ExitCode {
    if !harness::SUITES.contains(&suite.as_str()) {
        return fail(
            EXIT_INVALID,
            format!("unknown suite `{suite}`; valid suites: {}", harness::SUITES.join(", ")),
        );
    }
    if trials == Some(0) {
        return fail(EXIT_INVALID, "--trials must be ≥ 1");
    }
    let opts = SuiteOptions {
        trials,
        seed,
        workers: harness::resolve_workers(workers, None),
    };
    match harness::run_suite(&suite, &opts) {
        Ok(report) => {
            for c in &report.claims {
                println!("{} {}: {}: {}", if c.passed { "PASS" } else { "FAIL" }, report.suite, c.name, c.detail);
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(EXIT_RUNTIME, e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            seed,
            workers,
        } => cmd_run(config, out, seed, workers),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Datagen {
            manifold,
            n,
            out,
            seed,
            region_fraction,
        } => cmd_datagen(manifold, n, out, seed, region_fraction),
        Command::Verify {
            suite,
            trials,
            seed,
            workers,
        } => cmd_verify(suite, trials, seed, workers),
    }
}
