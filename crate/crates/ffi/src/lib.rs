//! C ABI over the `agora` library.
//!
//! Every fallible function returns an [`AgoraStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`agora_last_error_message`]. Objects are opaque handles
//! created by `*_new`/loader functions and released by the matching `*_free`.
//! Strings returned through `char **` out-pointers are owned by the caller
//! and must be released with [`agora_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use agora::bounds::{approx_ratio_bound, per_iteration_floor, runtime_bound_poly, runtime_bound_sgd, RuntimePrediction};
use agora::geometry::{self, BoundsReport, KappaParams, ManifoldSpec};
use agora::harness::{run_experiment, ExperimentConfig, RunReport};
use agora::{Dataset, Error, Seed};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgoraStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A numeric argument violated its documented range.
    OutOfRange = 3,
    /// The configuration failed to parse or validate.
    InvalidConfig = 4,
    /// Malformed points, labels, hyperparameters or dimensions.
    InvalidData = 5,
    /// File or serialization failure.
    Io = 6,
    /// The run failed after validation.
    Runtime = 7,
    /// A caller-supplied buffer is too small.
    BufferTooSmall = 8,
    /// The requested value does not exist for this object.
    Unavailable = 9,
    /// The library panicked; the message holds the panic payload.
    Panic = 10,
}

/// A manifold description (shape, size, ambient dimension, label split).
pub struct AgoraManifold(ManifoldSpec);

/// A labeled point set.
pub struct AgoraDataset(Dataset);

/// The outcome of one experiment: loop trace, baseline and summary.
pub struct AgoraRun(RunReport);

/// Step-count bound split into its terms.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AgoraRuntimePrediction {
    pub total_steps_bound: f64,
    pub train_term: f64,
    pub select_term: f64,
    pub socrates_term: f64,
}

impl From<&RuntimePrediction> for AgoraRuntimePrediction {
    fn from(p: &RuntimePrediction) -> Self {
        AgoraRuntimePrediction {
            total_steps_bound: p.total_steps_bound,
            train_term: p.train_term,
            select_term: p.select_term,
            socrates_term: p.socrates_term,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AgoraStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Range(_) => AgoraStatus::OutOfRange,
            Error::Config { .. } => AgoraStatus::InvalidConfig,
            Error::EmptyEvaluationSet
            | Error::EmptyTrainingSet
            | Error::DimensionMismatch { .. }
            | Error::InvalidData(_)
            | Error::MissingHyperparameter(_)
            | Error::InvalidHyperparameter(_) => AgoraStatus::InvalidData,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => AgoraStatus::Io,
            Error::TauSupportExhausted => AgoraStatus::Runtime,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: AgoraStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AgoraStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AgoraStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(msg);
            AgoraStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| fail(AgoraStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(AgoraStatus::NullPointer, format!("`{name}` is null")))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(AgoraStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(AgoraStatus::InvalidUtf8, format!("`{name}`: {e}")))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| fail(AgoraStatus::Io, e.to_string()))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn agora_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn agora_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn agora_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// Manifolds

fn new_manifold(spec: agora::Result<ManifoldSpec>, ambient_dim: usize, out_manifold: *mut *mut AgoraManifold) -> AgoraStatus {
    guard(|| {
        let slot = unsafe { out(out_manifold, "out_manifold")? };
        let mut spec = spec?;
        if ambient_dim != 0 {
            spec = spec.with_ambient_dim(ambient_dim)?;
        }
        *slot = boxed(AgoraManifold(spec));
        Ok(())
    })
}

/// Circle of `radius` in the plane, or embedded in `ambient_dim` dimensions
/// when non-zero.
///
/// # Safety
/// `out_manifold` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_manifold_circle(radius: f64, ambient_dim: usize, out_manifold: *mut *mut AgoraManifold) -> AgoraStatus {
    new_manifold(ManifoldSpec::circle(radius), ambient_dim, out_manifold)
}

/// 2-sphere of `radius`; `ambient_dim` as for [`agora_manifold_circle`].
///
/// # Safety
/// `out_manifold` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_manifold_sphere(radius: f64, ambient_dim: usize, out_manifold: *mut *mut AgoraManifold) -> AgoraStatus {
    new_manifold(ManifoldSpec::sphere(radius), ambient_dim, out_manifold)
}

/// Segment `[0, length]`; `ambient_dim` as for [`agora_manifold_circle`].
///
/// # Safety
/// `out_manifold` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_manifold_segment(length: f64, ambient_dim: usize, out_manifold: *mut *mut AgoraManifold) -> AgoraStatus {
    new_manifold(ManifoldSpec::segment(length), ambient_dim, out_manifold)
}

/// Dimension of the points a manifold produces.
///
/// # Safety
/// `manifold` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn agora_manifold_ambient_dim(manifold: *const AgoraManifold) -> usize {
    manifold.as_ref().map_or(0, |m| m.0.ambient_dim())
}

/// # Safety
/// `manifold` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn agora_manifold_free(manifold: *mut AgoraManifold) {
    if !manifold.is_null() {
        drop(Box::from_raw(manifold));
    }
}

// Bounds

fn real_bound(out_value: *mut f64, f: impl FnOnce() -> agora::Result<f64>) -> AgoraStatus {
    guard(|| {
        let slot = unsafe { out(out_value, "out_value")? };
        *slot = f()?;
        Ok(())
    })
}

fn count_bound(out_value: *mut u64, f: impl FnOnce() -> agora::Result<u64>) -> AgoraStatus {
    guard(|| {
        let slot = unsafe { out(out_value, "out_value")? };
        *slot = f()?;
        Ok(())
    })
}

/// Covering-count factor β(ρ).
///
/// # Safety
/// `manifold` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_beta(manifold: *const AgoraManifold, rho: f64, out_value: *mut f64) -> AgoraStatus {
    guard(|| {
        let m = unsafe { handle(manifold, "manifold")? };
        let slot = unsafe { out(out_value, "out_value")? };
        *slot = geometry::beta(&m.0, rho)?;
        Ok(())
    })
}

/// Sample size that covers the manifold at radius ρ/2 with probability 1 − δ.
///
/// # Safety
/// `manifold` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_niyogi_smale_n(manifold: *const AgoraManifold, rho: f64, delta: f64, out_value: *mut u64) -> AgoraStatus {
    guard(|| {
        let m = unsafe { handle(manifold, "manifold")? };
        let slot = unsafe { out(out_value, "out_value")? };
        *slot = geometry::niyogi_smale_n(&m.0, rho, delta)?;
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_lambda_rho(rho: f64, mu: f64, out_value: *mut f64) -> AgoraStatus {
    real_bound(out_value, || geometry::lambda_rho(rho, mu))
}

/// Representativeness level reachable at ρ.
///
/// # Safety
/// `manifold` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_epsilon_bound(manifold: *const AgoraManifold, rho: f64, out_value: *mut f64) -> AgoraStatus {
    guard(|| {
        let m = unsafe { handle(manifold, "manifold")? };
        let slot = unsafe { out(out_value, "out_value")? };
        *slot = geometry::epsilon_bound(&m.0, rho)?;
        Ok(())
    })
}

/// Capacity level (natural log) at ρ.
///
/// # Safety
/// `manifold` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_d_bound(manifold: *const AgoraManifold, rho: f64, out_value: *mut f64) -> AgoraStatus {
    guard(|| {
        let m = unsafe { handle(manifold, "manifold")? };
        let slot = unsafe { out(out_value, "out_value")? };
        *slot = geometry::d_bound(&m.0, rho)?;
        Ok(())
    })
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_hanneke_n(d: f64, epsilon: f64, delta: f64, c: f64, out_value: *mut u64) -> AgoraStatus {
    count_bound(out_value, || geometry::hanneke_n(d, epsilon, delta, c))
}

/// Number of perturbation rounds needed to cover the support.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_kappa_bound(
    support_size: u64,
    extra_size: u64,
    c_frac: f64,
    e_size: u64,
    delta: f64,
    out_value: *mut u64,
) -> AgoraStatus {
    count_bound(out_value, || geometry::kappa_bound(support_size, extra_size, c_frac, e_size, delta))
}

/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_per_iteration_floor(k: u32, out_value: *mut f64) -> AgoraStatus {
    real_bound(out_value, || per_iteration_floor(k))
}

/// # Safety
/// `out_lower` and `out_upper` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_approx_ratio_bound(theta_count: u32, out_lower: *mut f64, out_upper: *mut f64) -> AgoraStatus {
    guard(|| {
        let lo = unsafe { out(out_lower, "out_lower")? };
        let hi = unsafe { out(out_upper, "out_upper")? };
        (*lo, *hi) = approx_ratio_bound(theta_count)?;
        Ok(())
    })
}

/// Counting bound with a linear training cost `T_f(n) = t_f_scale · n`.
///
/// # Safety
/// `out_prediction` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_runtime_bound_poly(
    theta_count: u64,
    theta_size: u64,
    d_size: u64,
    e_size: u64,
    s_bar: f64,
    t_f_scale: f64,
    out_prediction: *mut AgoraRuntimePrediction,
) -> AgoraStatus {
    guard(|| {
        let slot = unsafe { out(out_prediction, "out_prediction")? };
        let p = runtime_bound_poly(theta_count, theta_size, d_size, e_size, s_bar, &|n| t_f_scale * n)?;
        *slot = (&p).into();
        Ok(())
    })
}

/// Counting bound with the shuffling-SGD training cost.
///
/// # Safety
/// `out_prediction` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn agora_runtime_bound_sgd(
    theta_count: u64,
    theta_size: u64,
    e_size: u64,
    s_bar: f64,
    f_bar: f64,
    batch_max: u64,
    lipschitz: f64,
    grad_bound: f64,
    zeta: f64,
    out_prediction: *mut AgoraRuntimePrediction,
) -> AgoraStatus {
    guard(|| {
        let slot = unsafe { out(out_prediction, "out_prediction")? };
        let p = runtime_bound_sgd(theta_count, theta_size, e_size, s_bar, f_bar, batch_max, lipschitz, grad_bound, zeta)?;
        *slot = (&p).into();
        Ok(())
    })
}

/// Every geometric bound for `(manifold, ρ, δ)` as one JSON object, with the
/// perturbation-round defaults (`c = 0.5`, no extra points).
///
/// # Safety
/// `manifold` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_bounds_report_json(
    manifold: *const AgoraManifold,
    rho: f64,
    delta: f64,
    out_json: *mut *mut c_char,
) -> AgoraStatus {
    guard(|| {
        let m = unsafe { handle(manifold, "manifold")? };
        let slot = unsafe { out(out_json, "out_json")? };
        let report = BoundsReport::compute(&m.0, rho, delta, KappaParams::default())?;
        *slot = into_c_string(serde_json::to_string(&report).map_err(Error::from)?)?;
        Ok(())
    })
}

// Datasets

/// `n` labeled points drawn uniformly from the manifold.
///
/// # Safety
/// `manifold` and `out_dataset` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_sample_manifold(
    manifold: *const AgoraManifold,
    n: usize,
    seed: u64,
    out_dataset: *mut *mut AgoraDataset,
) -> AgoraStatus {
    guard(|| {
        let m = unsafe { handle(manifold, "manifold")? };
        let slot = unsafe { out(out_dataset, "out_dataset")? };
        *slot = boxed(AgoraDataset(geometry::sample_manifold(&m.0, n, Seed::new(seed))?));
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out_dataset` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn agora_dataset_load_csv(path: *const c_char, out_dataset: *mut *mut AgoraDataset) -> AgoraStatus {
    guard(|| {
        let path = unsafe { text(path, "path")? };
        let slot = unsafe { out(out_dataset, "out_dataset")? };
        *slot = boxed(AgoraDataset(Dataset::load("D", Path::new(path))?));
        Ok(())
    })
}

/// # Safety
/// `dataset` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn agora_dataset_save_csv(dataset: *const AgoraDataset, path: *const c_char) -> AgoraStatus {
    guard(|| {
        let d = unsafe { handle(dataset, "dataset")? };
        let path = unsafe { text(path, "path")? };
        d.0.save(Path::new(path))?;
        Ok(())
    })
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `dataset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn agora_dataset_len(dataset: *const AgoraDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.0.len())
}

/// Point dimension, or 0 for a null handle.
///
/// # Safety
/// `dataset` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn agora_dataset_dim(dataset: *const AgoraDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.0.dim())
}

/// Copies point `index` into `coords` (room for `coords_len` values) and its
/// label into `out_label`.
///
/// # Safety
/// `coords` must have room for `coords_len` doubles; other pointers valid.
#[no_mangle]
pub unsafe extern "C" fn agora_dataset_point(
    dataset: *const AgoraDataset,
    index: usize,
    coords: *mut f64,
    coords_len: usize,
    out_label: *mut u8,
) -> AgoraStatus {
    guard(|| {
        let d = unsafe { handle(dataset, "dataset")? };
        let label = unsafe { out(out_label, "out_label")? };
        if coords.is_null() {
            return Err(fail(AgoraStatus::NullPointer, "`coords` is null"));
        }
        let p = d.0.points().get(index).ok_or_else(|| {
            fail(AgoraStatus::OutOfRange, format!("index {index} out of range for {} points", d.0.len()))
        })?;
        if coords_len < p.x.len() {
            return Err(fail(
                AgoraStatus::BufferTooSmall,
                format!("need {} coordinates, buffer holds {coords_len}", p.x.len()),
            ));
        }
        unsafe { ptr::copy_nonoverlapping(p.x.as_ptr(), coords, p.x.len()) };
        *label = p.y;
        Ok(())
    })
}

/// # Safety
/// `dataset` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn agora_dataset_free(dataset: *mut AgoraDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// Whether every point of a `mesh_n` mesh of the manifold lies within
/// `radius` of some point of `points` (`count` points of `dim` coordinates,
/// row-major). Writes the uncovered mesh fraction too when
/// `out_uncovered_fraction` is non-null.
///
/// # Safety
/// `points` must hold `count * dim` doubles; other pointers valid or null
/// where allowed.
#[no_mangle]
pub unsafe extern "C" fn agora_cover_check(
    manifold: *const AgoraManifold,
    points: *const f64,
    count: usize,
    dim: usize,
    radius: f64,
    mesh_n: usize,
    out_covered: *mut bool,
    out_uncovered_fraction: *mut f64,
) -> AgoraStatus {
    guard(|| {
        let m = unsafe { handle(manifold, "manifold")? };
        let covered = unsafe { out(out_covered, "out_covered")? };
        if dim != m.0.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: m.0.ambient_dim(),
                found: dim,
            }
            .into());
        }
        let flat: &[f64] = if count == 0 {
            &[]
        } else if points.is_null() {
            return Err(fail(AgoraStatus::NullPointer, "`points` is null"));
        } else {
            unsafe { std::slice::from_raw_parts(points, count * dim) }
        };
        let rows: Vec<Vec<f64>> = flat.chunks(dim.max(1)).map(<[f64]>::to_vec).collect();
        let r = geometry::cover_check(&rows, &m.0, radius, mesh_n)?;
        *covered = r.covered;
        if let Some(f) = unsafe { out_uncovered_fraction.as_mut() } {
            *f = r.uncovered_fraction;
        }
        Ok(())
    })
}

// Runs

/// Runs the loop and the enumeration baseline from a JSON configuration.
/// `seed` replaces the configured master seed when `override_seed` is true;
/// `workers` of 0 means the configured or environment default.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out_run` valid.
#[no_mangle]
pub unsafe extern "C" fn agora_run_from_config_json(
    config_json: *const c_char,
    override_seed: bool,
    seed: u64,
    workers: usize,
    out_run: *mut *mut AgoraRun,
) -> AgoraStatus {
    guard(|| {
        let json = unsafe { text(config_json, "config_json")? };
        let slot = unsafe { out(out_run, "out_run")? };
        let cfg = ExperimentConfig::from_json(json)?;
        cfg.validate()?;
        let workers = agora::harness::resolve_workers((workers > 0).then_some(workers), cfg.parallel_workers);
        let report = run_experiment(&cfg, override_seed.then_some(seed), workers)?;
        *slot = boxed(AgoraRun(report));
        Ok(())
    })
}

/// # Safety
/// `run` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_run_best_accuracy(run: *const AgoraRun, out_value: *mut f64) -> AgoraStatus {
    guard(|| {
        let r = unsafe { handle(run, "run")? };
        *unsafe { out(out_value, "out_value")? } = r.0.summary.best_accuracy;
        Ok(())
    })
}

/// # Safety
/// `run` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_run_baseline_accuracy(run: *const AgoraRun, out_value: *mut f64) -> AgoraStatus {
    guard(|| {
        let r = unsafe { handle(run, "run")? };
        *unsafe { out(out_value, "out_value")? } = r.0.summary.baseline_accuracy;
        Ok(())
    })
}

/// Loop accuracy over baseline accuracy; `Unavailable` when the baseline
/// scored 0.
///
/// # Safety
/// `run` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_run_ratio(run: *const AgoraRun, out_value: *mut f64) -> AgoraStatus {
    guard(|| {
        let r = unsafe { handle(run, "run")? };
        let slot = unsafe { out(out_value, "out_value")? };
        *slot = r.0.summary.ratio.ok_or_else(|| fail(AgoraStatus::Unavailable, "baseline accuracy is 0"))?;
        Ok(())
    })
}

/// Number of loop iterations, or 0 for a null handle.
///
/// # Safety
/// `run` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn agora_run_iterations(run: *const AgoraRun) -> usize {
    run.as_ref().map_or(0, |r| r.0.summary.iterations)
}

/// The per-iteration trace in CSV form.
///
/// # Safety
/// `run` and `out_csv` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_run_trace_csv(run: *const AgoraRun, out_csv: *mut *mut c_char) -> AgoraStatus {
    guard(|| {
        let r = unsafe { handle(run, "run")? };
        let slot = unsafe { out(out_csv, "out_csv")? };
        *slot = into_c_string(r.0.agora.trace.to_csv())?;
        Ok(())
    })
}

/// The run summary as pretty-printed JSON.
///
/// # Safety
/// `run` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn agora_run_summary_json(run: *const AgoraRun, out_json: *mut *mut c_char) -> AgoraStatus {
    guard(|| {
        let r = unsafe { handle(run, "run")? };
        let slot = unsafe { out(out_json, "out_json")? };
        *slot = into_c_string(serde_json::to_string_pretty(&r.0.summary).map_err(Error::from)?)?;
        Ok(())
    })
}

/// # Safety
/// `run` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn agora_run_free(run: *mut AgoraRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}
