//! The train → augment → prune loop.
//!
//! Each iteration trains one model per surviving hyperparameter set on the
//! current training set, scores it on the fixed evaluation set, keeps the
//! best model seen so far (strict improvement only), perturbs the evaluation
//! points that a chosen model misses, has the teacher label the
//! perturbations, adds them to the training set, and removes every set
//! containing the atom selected from the sorted score table.
//!
//! Randomness: every evaluation on `E` uses `master.stream("eval")`, so a
//! stochastic prediction on a given point only changes when the model does.
//! Perturbations of iteration `k` draw from `master.stream("tau").index(k)`
//! and teacher labels from `master.stream("socrates").index(k)`, indexed by
//! source point. Training
//! randomness comes only from the set's own `seed` atom. The enumeration
//! baseline therefore reproduces iteration 1 exactly.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{misses, Classifier};
use crate::data::{Dataset, LabeledPoint};
use crate::error::{Error, Result};
use crate::hyper::{HyperparamAtom, HyperparamSet, HyperparamSpace};
use crate::rng::Seed;
use crate::tau::{perturb_indices, TauFunction};
use crate::trainer::{decode_theta, train_with_config};

/// Which model's misses seed the perturbation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MSource {
    /// Best model over all iterations so far.
    #[default]
    Incumbent,
    /// Best model of the current iteration.
    IterationBest,
}

#[derive(Debug, Clone)]
pub struct AgoraInput {
    pub timaeus: Classifier,
    pub socrates: Classifier,
    pub d: Dataset,
    pub e: Dataset,
    pub theta: HyperparamSpace,
    pub tau: TauFunction,
    pub m_source: MSource,
    pub master_seed: Seed,
}

impl AgoraInput {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        timaeus: Classifier,
        socrates: Classifier,
        d: Dataset,
        e: Dataset,
        theta: HyperparamSpace,
        tau: TauFunction,
        m_source: MSource,
        master_seed: Seed,
    ) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidHyperparameter("hyperparameter space is empty".into()));
        }
        if d.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if e.is_empty() {
            return Err(Error::EmptyEvaluationSet);
        }
        for (found, what) in [(d.dim(), "D"), (e.dim(), "E"), (socrates.dim(), "socrates")] {
            if found != timaeus.dim() {
                return Err(Error::InvalidData(format!(
                    "{what} has dimension {found}, model expects {}",
                    timaeus.dim()
                )));
            }
        }
        if !d.is_disjoint(&e) {
            return Err(Error::InvalidData("training and evaluation sets share a point".into()));
        }
        for set in theta.sets() {
            decode_theta(set)?;
        }
        Ok(AgoraInput {
            timaeus,
            socrates,
            d,
            e,
            theta,
            tau,
            m_source,
            master_seed,
        })
    }

    /// Evaluation stream shared by every set and iteration.
    pub fn eval_seed(&self) -> Seed {
        self.master_seed.stream("eval")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub accuracy: f64,
    pub theta: HyperparamSet,
    pub train_steps: u64,
}

/// Score table Q, sorted worst first by (accuracy, set id).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreTable {
    rows: Vec<ScoreRow>,
}

impl ScoreTable {
    pub fn sorted(mut rows: Vec<ScoreRow>) -> Self {
        rows.sort_by(|a, b| {
            a.accuracy
                .total_cmp(&b.accuracy)
                .then(a.theta.id().cmp(&b.theta.id()))
        });
        ScoreTable { rows }
    }

    pub fn rows(&self) -> &[ScoreRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Chooses the atom whose sets are removed after an iteration.
pub trait PruningRule: Send + Sync {
    fn select(&self, q: &ScoreTable) -> Result<HyperparamAtom>;
}

/// For each atom of the worst set, the length of the run of leading rows
/// that all contain it; the longest run wins, earlier atoms win ties.
#[derive(Debug, Clone, Copy, Default)]
pub struct PrefixRun;

impl PrefixRun {
    pub fn run_length(q: &ScoreTable, atom: &HyperparamAtom) -> usize {
        q.rows.iter().take_while(|r| r.theta.contains(atom)).count()
    }
}

impl PruningRule for PrefixRun {
    fn select(&self, q: &ScoreTable) -> Result<HyperparamAtom> {
        let worst = q
            .rows
            .first()
            .ok_or_else(|| Error::InvalidData("empty score table".into()))?;
        let mut best: Option<(usize, &HyperparamAtom)> = None;
        for atom in worst.theta.atoms() {
            let run = Self::run_length(q, atom);
            if best.is_none_or(|(b, _)| run > b) {
                best = Some((run, atom));
            }
        }
        best.map(|(_, a)| a.clone())
            .ok_or_else(|| Error::InvalidHyperparameter(format!("set {} has no atoms to prune", worst.theta.id())))
    }
}

pub fn select_pruning_atom(q: &ScoreTable) -> Result<HyperparamAtom> {
    PrefixRun.select(q)
}

pub fn prune_space(theta: &HyperparamSpace, atom: &HyperparamAtom) -> HyperparamSpace {
    let out = theta.prune(atom);
    debug_assert!(out.sets().iter().all(|s| !s.contains(atom)));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub k: usize,
    pub table: ScoreTable,
    /// Incumbent accuracy at the end of the iteration.
    pub incumbent_acc: f64,
    pub incumbent_theta: usize,
    /// Set whose model became the incumbent during this iteration, if any.
    pub new_incumbent: Option<usize>,
    /// Size of the training set used in this iteration.
    pub d_size: usize,
    pub m_size: usize,
    pub m_dropped: usize,
    pub pruned: HyperparamAtom,
    pub surviving: Vec<usize>,
    pub socrates_calls: u64,
}

impl IterationRecord {
    pub fn train_steps(&self) -> u64 {
        self.table.rows().iter().map(|r| r.train_steps).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunTrace {
    pub iterations: Vec<IterationRecord>,
}

pub const TRACE_HEADER: &str =
    "iter,theta_id,accuracy,is_incumbent,d_size,m_size,pruned_key,pruned_value,surviving_count,train_steps,socrates_calls";

impl RunTrace {
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn total_train_steps(&self) -> u64 {
        self.iterations.iter().map(IterationRecord::train_steps).sum()
    }

    pub fn total_socrates_calls(&self) -> u64 {
        self.iterations.iter().map(|it| it.socrates_calls).sum()
    }

    /// Incumbent accuracy after each iteration.
    pub fn incumbent_curve(&self) -> Vec<f64> {
        self.iterations.iter().map(|it| it.incumbent_acc).collect()
    }

    pub fn m_sizes(&self) -> Vec<usize> {
        self.iterations.iter().map(|it| it.m_size).collect()
    }

    /// One row per trained set, in sorted-table order. `train_steps` is per
    /// set, `socrates_calls` the iteration total.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for it in &self.iterations {
            for row in it.table.rows() {
                let id = row.theta.id();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    it.k,
                    id,
                    row.accuracy,
                    it.new_incumbent == Some(id),
                    it.d_size,
                    it.m_size,
                    csv_field(&it.pruned.key),
                    csv_field(&it.pruned.value),
                    it.surviving.len(),
                    row.train_steps,
                    it.socrates_calls
                );
            }
        }
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Worker pool for the per-set map. Results are always reduced in set-id
/// order, so the number of workers never changes the outcome.
pub struct Executor {
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::range("workers must be ≥ 1"));
        }
        let pool = if workers == 1 {
            None
        } else {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| Error::InvalidData(format!("cannot start worker pool: {e}")))?,
            )
        };
        Ok(Executor { pool })
    }

    pub fn sequential() -> Self {
        Executor { pool: None }
    }

    pub fn workers(&self) -> usize {
        self.pool.as_ref().map_or(1, rayon::ThreadPool::current_num_threads)
    }

    pub fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match &self.pool {
            None => items.iter().map(f).collect(),
            Some(pool) => pool.install(|| items.par_iter().map(f).collect()),
        }
    }
}

struct Evaluated {
    id: usize,
    model: Classifier,
    accuracy: f64,
    missed: Vec<usize>,
    train_steps: u64,
}

fn train_and_score(input: &AgoraInput, d: &Dataset, theta: &HyperparamSet) -> Result<Evaluated> {
    let cfg = decode_theta(theta)?;
    let model = train_with_config(&input.timaeus, d, &cfg)?;
    let missed = misses(&model, &input.e, input.eval_seed())?;
    Ok(Evaluated {
        id: theta.id(),
        accuracy: 1.0 - missed.len() as f64 / input.e.len() as f64,
        model,
        missed,
        train_steps: cfg.epochs as u64 * d.len() as u64,
    })
}

fn train_all(input: &AgoraInput, d: &Dataset, theta: &HyperparamSpace, exec: &Executor) -> Result<Vec<Evaluated>> {
    exec.map(theta.sets(), |s| train_and_score(input, d, s))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone)]
pub struct AgoraOutcome {
    pub best_model: Classifier,
    pub best_acc: f64,
    pub best_theta: usize,
    pub trace: RunTrace,
    /// Final training set.
    pub d: Dataset,
}

/// Runs the loop until the hyperparameter space is empty.
pub fn run_agora(input: &AgoraInput, exec: &Executor) -> Result<AgoraOutcome> {
    run_agora_with(input, exec, &PrefixRun)
}

pub fn run_agora_with(input: &AgoraInput, exec: &Executor, rule: &dyn PruningRule) -> Result<AgoraOutcome> {
    let e_keys = input.e.keys();
    let initial_count = input.theta.len();
    let mut theta = input.theta.clone();
    let mut d = input.d.clone();
    let mut trace = RunTrace::default();
    // (accuracy, set id, model, misses)
    let mut incumbent: Option<(f64, usize, Classifier, Vec<usize>)> = None;
    let mut k = 0;

    while !theta.is_empty() {
        k += 1;
        assert!(k <= initial_count, "more iterations than hyperparameter sets");
        let results = train_all(input, &d, &theta, exec)?;

        let mut new_incumbent = None;
        for r in &results {
            if incumbent.as_ref().is_none_or(|(a, ..)| r.accuracy > *a) {
                incumbent = Some((r.accuracy, r.id, r.model.clone(), r.missed.clone()));
                new_incumbent = Some(r.id);
            }
        }
        let (inc_acc, inc_id, _, inc_missed) = incumbent.as_ref().expect("at least one set was trained");

        let source_missed = match input.m_source {
            MSource::Incumbent => inc_missed.clone(),
            MSource::IterationBest => {
                let mut best = &results[0];
                for r in &results[1..] {
                    if r.accuracy > best.accuracy {
                        best = r;
                    }
                }
                best.missed.clone()
            }
        };

        let m = perturb_indices(
            &input.tau,
            &input.e,
            &source_missed,
            input.master_seed.stream("tau").index(k as u64),
        );
        let label_seed = input.master_seed.stream("socrates").index(k as u64);
        let labeled = m
            .points
            .iter()
            .zip(&m.sources)
            .map(|(x, &src)| {
                assert!(!e_keys.contains(&crate::data::CoordKey::of(x)), "perturbation coincides with an evaluation point");
                let y = input.socrates.predict(x, label_seed.index(src as u64))?;
                LabeledPoint::new(x.clone(), y)
            })
            .collect::<Result<Vec<_>>>()?;
        let d_size = d.len();
        d = d.union_dedup(labeled)?;
        assert!(d.len() <= d_size + input.e.len());
        assert!(d.is_disjoint(&input.e), "an evaluation point entered the training set");

        let table = ScoreTable::sorted(
            results
                .iter()
                .zip(theta.sets())
                .map(|(r, s)| ScoreRow {
                    accuracy: r.accuracy,
                    theta: s.clone(),
                    train_steps: r.train_steps,
                })
                .collect(),
        );
        let atom = rule.select(&table)?;
        let next = prune_space(&theta, &atom);
        assert!(next.len() < theta.len());

        if let Some(prev) = trace.iterations.last() {
            assert!(*inc_acc >= prev.incumbent_acc);
        }
        trace.iterations.push(IterationRecord {
            k,
            table,
            incumbent_acc: *inc_acc,
            incumbent_theta: *inc_id,
            new_incumbent,
            d_size,
            m_size: m.len(),
            m_dropped: m.dropped,
            pruned: atom,
            surviving: next.ids(),
            socrates_calls: m.len() as u64,
        });
        theta = next;
    }

    let (best_acc, best_theta, best_model, _) = incumbent.expect("hyperparameter space was nonempty");
    Ok(AgoraOutcome {
        best_model,
        best_acc,
        best_theta,
        trace,
        d,
    })
}

#[derive(Debug, Clone)]
pub struct BaselineOutcome {
    pub best_model: Classifier,
    pub best_acc: f64,
    pub best_theta: usize,
    /// `(set id, accuracy)` for every set, in id order.
    pub accuracies: Vec<(usize, f64)>,
    pub train_steps: u64,
}

/// Plain enumeration: every set trained once on the original training set,
/// scored with the same streams as the loop's first iteration.
pub fn enumerate_baseline(input: &AgoraInput, exec: &Executor) -> Result<BaselineOutcome> {
    let results = train_all(input, &input.d, &input.theta, exec)?;
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.accuracy > results[best].accuracy {
            best = i;
        }
    }
    let accuracies = results.iter().map(|r| (r.id, r.accuracy)).collect();
    let train_steps = results.iter().map(|r| r.train_steps).sum();
    let r = results.into_iter().nth(best).expect("nonempty space");
    Ok(BaselineOutcome {
        best_model: r.model,
        best_acc: r.accuracy,
        best_theta: r.id,
        accuracies,
        train_steps,
    })
}
