//! Grid comparisons of every bound against [`Oracle`], plus the range
//! checks each bound documents.

use agora::bounds::{approx_ratio_bound, per_iteration_floor, runtime_bound_poly, runtime_bound_sgd};
use agora::geometry::{
    beta, d_bound, epsilon_bound, hanneke_n, kappa_bound, lambda_rho, niyogi_smale_n, niyogi_smale_rhs, ManifoldSpec,
};

use super::oracle::{grid, rel_err, Oracle, Shape};

pub const TOLERANCE: f64 = 1e-12;
pub const GRID: usize = 100;

#[derive(Debug)]
pub struct FormulaCheck {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    /// Cases whose integer result differs from the rounded oracle value.
    pub integer_mismatches: usize,
}

impl FormulaCheck {
    pub fn passed(&self) -> bool {
        self.cases == GRID && self.worst <= TOLERANCE && self.integer_mismatches == 0
    }
}

fn check(name: &'static str, pairs: impl IntoIterator<Item = (f64, f64)>) -> FormulaCheck {
    let mut cases = 0;
    let mut worst = 0.0f64;
    for (got, want) in pairs {
        cases += 1;
        worst = worst.max(rel_err(got, want));
    }
    FormulaCheck {
        name,
        cases,
        worst,
        integer_mismatches: 0,
    }
}

fn check_rounded(name: &'static str, pairs: impl IntoIterator<Item = (u64, u64)>) -> FormulaCheck {
    let mut cases = 0;
    let mut mismatches = 0;
    for (got, want) in pairs {
        cases += 1;
        if got != want {
            mismatches += 1;
        }
    }
    FormulaCheck {
        name,
        cases,
        worst: 0.0,
        integer_mismatches: mismatches,
    }
}

/// The shapes a grid cycles through, with the matching oracle shape data.
fn shapes() -> Vec<(ManifoldSpec, Shape)> {
    vec![
        (ManifoldSpec::circle(1.0).unwrap(), Shape::circle(1.0)),
        (ManifoldSpec::circle(2.5).unwrap(), Shape::circle(2.5)),
        (ManifoldSpec::sphere(1.0).unwrap(), Shape::sphere(1.0)),
        (ManifoldSpec::sphere(0.7).unwrap(), Shape::sphere(0.7)),
    ]
}

/// `GRID` valid ρ values per shape, cycling through the shapes.
fn rho_cases() -> Vec<(ManifoldSpec, Shape, f64)> {
    let shapes = shapes();
    grid(0.002, 0.998, GRID)
        .into_iter()
        .enumerate()
        .map(|(i, u)| {
            let (spec, shape) = shapes[i % shapes.len()].clone();
            let rho = u * shape.mu / 2.0;
            (spec, shape, rho)
        })
        .collect()
}

pub fn all_formula_checks() -> Vec<FormulaCheck> {
    let mut o = Oracle::default();
    let cases = rho_cases();
    let deltas = grid(0.0, 0.5, GRID);
    let mut out = Vec::new();

    out.push(check(
        "beta",
        cases.iter().map(|(spec, s, rho)| (beta(spec, *rho).unwrap(), o.beta(*s, *rho))).collect::<Vec<_>>(),
    ));

    out.push(check(
        "niyogi_smale_rhs",
        cases
            .iter()
            .zip(&deltas)
            .map(|((spec, s, rho), &delta)| (niyogi_smale_rhs(spec, *rho, delta).unwrap(), o.niyogi_smale_rhs(*s, *rho, delta)))
            .collect::<Vec<_>>(),
    ));

    out.push(check_rounded(
        "niyogi_smale_n",
        cases
            .iter()
            .zip(&deltas)
            .map(|((spec, s, rho), &delta)| {
                let rhs = o.niyogi_smale_rhs(*s, *rho, delta);
                (niyogi_smale_n(spec, *rho, delta).unwrap(), rhs.floor() as u64 + 1)
            })
            .collect::<Vec<_>>(),
    ));

    // the upper end μ/2 is admitted here
    let lambda_cases: Vec<(f64, f64)> = grid(0.0, 1.0, GRID - 1)
        .into_iter()
        .chain([1.0])
        .enumerate()
        .map(|(i, u)| {
            let mu = [0.5, 1.0, 3.0, 10.0][i % 4];
            (u * mu / 2.0, mu)
        })
        .collect();
    out.push(check(
        "lambda_rho",
        lambda_cases
            .iter()
            .map(|&(rho, mu)| (lambda_rho(rho, mu).unwrap(), o.lambda_rho(rho, mu)))
            .collect::<Vec<_>>(),
    ));

    out.push(check(
        "epsilon_bound",
        cases
            .iter()
            .map(|(spec, s, rho)| (epsilon_bound(spec, *rho).unwrap(), o.epsilon(*s, *rho)))
            .collect::<Vec<_>>(),
    ));

    out.push(check(
        "d_bound",
        cases.iter().map(|(spec, s, rho)| (d_bound(spec, *rho).unwrap(), o.d(*s, *rho))).collect::<Vec<_>>(),
    ));

    let eps = grid(0.0, 0.5, GRID);
    out.push(check_rounded(
        "hanneke_n",
        (0..GRID)
            .map(|i| {
                let d = 1.0 + 0.37 * i as f64;
                let (e, delta) = (eps[i], deltas[(i * 37) % GRID]);
                let c = std::f64::consts::LN_2 + 0.05 * (i % 7) as f64;
                let rhs = o.hanneke_rhs(d, e, delta, c);
                (hanneke_n(d, e, delta, c).unwrap(), rhs.ceil() as u64)
            })
            .collect::<Vec<_>>(),
    ));

    let fracs = grid(0.0, 1.0, GRID);
    out.push(check_rounded(
        "kappa_bound",
        (0..GRID)
            .map(|i| {
                let x = 10 + 13 * i as u64;
                let dl = (i as u64 * 7) % 50;
                let c = fracs[(i * 31) % GRID];
                let e = 1 + 9 * i as u64;
                let delta = deltas[(i * 53) % GRID];
                let rhs = o.kappa_rhs(x, dl, c, e, delta);
                (kappa_bound(x, dl, c, e, delta).unwrap(), rhs.ceil() as u64)
            })
            .collect::<Vec<_>>(),
    ));

    out.push(check(
        "per_iteration_floor",
        (1..=GRID as u32)
            .map(|k| (per_iteration_floor(k).unwrap(), o.floor_at(k)))
            .collect::<Vec<_>>(),
    ));

    out.push(check(
        "approx_ratio_bound",
        (1..=GRID as u32)
            .map(|n| (approx_ratio_bound(n).unwrap().1, o.ratio_upper(n)))
            .collect::<Vec<_>>(),
    ));

    out.push(check(
        "runtime_bound_poly",
        (0..GRID)
            .map(|i| {
                let n = 1 + (i % 12) as u64;
                let t = 1 + (i % 5) as u64;
                let d = 10 + 17 * i as u64;
                let e = 5 + 11 * i as u64;
                let s_bar = [0.0, 1.0, 2.5][i % 3];
                let slope = 1.0 + (i % 9) as f64;
                let got = runtime_bound_poly(n, t, d, e, s_bar, &|x| slope * x).unwrap().total_steps_bound;
                (got, o.runtime_poly(n, t, d, e, s_bar, slope))
            })
            .collect::<Vec<_>>(),
    ));

    out.push(check(
        "runtime_bound_sgd",
        (0..GRID)
            .map(|i| {
                let n = 1 + (i % 12) as u64;
                let t = 1 + (i % 5) as u64;
                let e = 5 + 11 * i as u64;
                let s_bar = [0.0, 1.0, 2.5][i % 3];
                let f_bar = 1.0 + (i % 6) as f64;
                let b = 1 + (i % 64) as u64;
                let (l, g) = (0.25 + 0.1 * (i % 4) as f64, 0.5 + (i % 3) as f64);
                let z = fracs[(i * 17) % GRID].powi(2);
                let got = runtime_bound_sgd(n, t, e, s_bar, f_bar, b, l, g, z).unwrap().total_steps_bound;
                (got, o.runtime_sgd(n, t, e, s_bar, f_bar, b, l, g, z))
            })
            .collect::<Vec<_>>(),
    ));

    out
}

/// Out-of-range inputs that must be rejected, by label.
pub fn range_rejections() -> Vec<(&'static str, bool)> {
    let c = ManifoldSpec::circle(1.0).unwrap();
    let s = ManifoldSpec::sphere(2.0).unwrap();
    let ln2 = std::f64::consts::LN_2;
    vec![
        ("beta rho = 0", beta(&c, 0.0).is_err()),
        ("beta rho < 0", beta(&c, -0.1).is_err()),
        ("beta rho = mu/2", beta(&c, 0.5).is_err()),
        ("beta rho > mu/2", beta(&s, 1.5).is_err()),
        ("beta rho NaN", beta(&c, f64::NAN).is_err()),
        ("niyogi_smale_n delta = 0", niyogi_smale_n(&c, 0.2, 0.0).is_err()),
        ("niyogi_smale_n delta > 1/2", niyogi_smale_n(&c, 0.2, 0.6).is_err()),
        ("niyogi_smale_n rho = mu/2", niyogi_smale_n(&c, 0.5, 0.1).is_err()),
        ("lambda_rho rho = 0", lambda_rho(0.0, 1.0).is_err()),
        ("lambda_rho rho > mu/2", lambda_rho(0.6, 1.0).is_err()),
        ("lambda_rho mu = 0", lambda_rho(0.1, 0.0).is_err()),
        ("epsilon_bound rho = mu/2", epsilon_bound(&c, 0.5).is_err()),
        ("epsilon_bound rho = 0", epsilon_bound(&c, 0.0).is_err()),
        ("d_bound rho = mu/2", d_bound(&c, 0.5).is_err()),
        ("d_bound rho < 0", d_bound(&s, -1.0).is_err()),
        ("hanneke_n c < ln 2", hanneke_n(4.0, 0.1, 0.1, ln2 - 1e-9).is_err()),
        ("hanneke_n epsilon > 1/2", hanneke_n(4.0, 0.6, 0.1, 1.0).is_err()),
        ("hanneke_n epsilon = 0", hanneke_n(4.0, 0.0, 0.1, 1.0).is_err()),
        ("hanneke_n delta > 1/2", hanneke_n(4.0, 0.1, 0.7, 1.0).is_err()),
        ("hanneke_n d = 0", hanneke_n(0.0, 0.1, 0.1, 1.0).is_err()),
        ("kappa_bound c = 0", kappa_bound(100, 0, 0.0, 50, 0.1).is_err()),
        ("kappa_bound c = 1", kappa_bound(100, 0, 1.0, 50, 0.1).is_err()),
        ("kappa_bound |E| = 0", kappa_bound(100, 0, 0.5, 0, 0.1).is_err()),
        ("kappa_bound delta = 0", kappa_bound(100, 0, 0.5, 50, 0.0).is_err()),
        ("kappa_bound empty support", kappa_bound(0, 0, 0.5, 50, 0.1).is_err()),
        ("per_iteration_floor k = 0", per_iteration_floor(0).is_err()),
        ("approx_ratio_bound n = 0", approx_ratio_bound(0).is_err()),
        ("runtime_bound_poly |Θ| = 0", runtime_bound_poly(0, 1, 10, 10, 1.0, &|x| x).is_err()),
        ("runtime_bound_poly |E| = 0", runtime_bound_poly(3, 1, 10, 0, 1.0, &|x| x).is_err()),
        ("runtime_bound_poly S < 0", runtime_bound_poly(3, 1, 10, 10, -1.0, &|x| x).is_err()),
        ("runtime_bound_poly T_f < 0", runtime_bound_poly(3, 1, 10, 10, 1.0, &|x| -x).is_err()),
        ("runtime_bound_sgd zeta = 0", runtime_bound_sgd(3, 1, 10, 1.0, 1.0, 8, 0.25, 1.0, 0.0).is_err()),
        ("runtime_bound_sgd L = 0", runtime_bound_sgd(3, 1, 10, 1.0, 1.0, 8, 0.0, 1.0, 0.01).is_err()),
        ("runtime_bound_sgd G < 0", runtime_bound_sgd(3, 1, 10, 1.0, 1.0, 8, 0.25, -1.0, 0.01).is_err()),
        ("runtime_bound_sgd |B| = 0", runtime_bound_sgd(3, 1, 10, 1.0, 1.0, 0, 0.25, 1.0, 0.01).is_err()),
    ]
}
