use std::sync::Arc;

use rayon::prelude::*;

use super::{derive_seed, relative_max_error, row_or_fail, spread};
use crate::error::Result;
use crate::experiments::config::ExperimentConfig;
use crate::experiments::report::ReportRow;
use crate::harmonics::{random_harmonic, HarmonicSpec, Part, RealHarmonic, SphereFunction};
use crate::operators::{
    t_operator, t_operator_expansion, test_points, zonal_convolve, zonal_l1_norm, zonal_sup,
    OperatorKind, RidgePolynomial, ZonalOperator,
};
use crate::quadrature::sphere_product_rule_with_cap;
use crate::special_fn::{DimensionParams, ZonalKernel};

const SUITE: &str = "operators";

enum Task {
    Reproduce { d: usize, n: usize, seed: u64 },
    Expansion { index: usize },
    Projections { d: usize, k: usize, m: usize },
    ZonalReduction { d: usize, n: usize },
    Growth { d: usize },
}

/// Reproduction of `H_n^d` by `T_n`, the signed projection expansion of `T_n`, idempotence
/// and annihilation of projections, the zonal reduction against full sphere quadrature, and
/// band stability of `‖T_n g‖_∞ / (n^λ ‖g‖_1)` over zonal test inputs.
pub(crate) fn run(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let mut tasks = Vec::new();
    for &d in &cfg.operator_dims {
        for &n in &cfg.operator_degrees {
            for &seed in &cfg.seeds {
                tasks.push(Task::Reproduce { d, n, seed });
            }
        }
        tasks.push(Task::Projections { d, k: 3, m: 5 });
        tasks.push(Task::Projections { d, k: 10, m: 8 });
        tasks.push(Task::ZonalReduction { d, n: 6 });
    }
    for index in 0..cfg.expansion_polynomials {
        tasks.push(Task::Expansion { index });
    }
    for &d in &cfg.dims {
        tasks.push(Task::Growth { d });
    }
    tasks
        .par_iter()
        .flat_map_iter(|task| task.run(cfg))
        .collect()
}

impl Task {
    fn run(&self, cfg: &ExperimentConfig) -> Vec<ReportRow> {
        let tol = cfg.tolerances.identity;
        match *self {
            Task::Reproduce { d, n, seed } => {
                let key = format!("d{d}/reproduce/n={n:02}/seed={seed}");
                vec![row_or_fail(SUITE, key.clone(), reproduce(cfg, d, n, seed).map(|e| {
                    ReportRow::at_most(SUITE, key, e, tol).detail("max|T_n f - f| / max|f|")
                }))]
            }
            Task::Expansion { index } => {
                let key = format!("d3/expansion/i={index:02}");
                vec![row_or_fail(SUITE, key.clone(), expansion(cfg, index).map(|(n, e)| {
                    ReportRow::at_most(SUITE, key, e, tol).detail(format!("n={n}, degree<={}", cfg.expansion_degree))
                }))]
            }
            Task::Projections { d, k, m } => match projections(cfg, d, k, m) {
                Ok((idem, annihilate)) => vec![
                    ReportRow::at_most(SUITE, format!("d{d}/idempotent/k={k:02}"), idem, tol),
                    ReportRow::at_most(SUITE, format!("d{d}/annihilate/k={k:02}/m={m:02}"), annihilate, tol),
                ],
                Err(e) => vec![ReportRow::failed(SUITE, format!("d{d}/projections/k={k:02}"), e.to_string())],
            },
            Task::ZonalReduction { d, n } => {
                let key = format!("d{d}/zonal-reduction/n={n:02}");
                vec![row_or_fail(SUITE, key.clone(), zonal_reduction(cfg, d, n).map(|e| {
                    ReportRow::at_most(SUITE, key, e, tol).detail("1-D convolution vs sphere quadrature")
                }))]
            }
            Task::Growth { d } => growth(cfg, d)
                .unwrap_or_else(|e| vec![ReportRow::failed(SUITE, format!("d{d}/growth"), e.to_string())]),
        }
    }
}

fn reproduce(cfg: &ExperimentConfig, d: usize, n: usize, seed: u64) -> Result<f64> {
    let dims = DimensionParams::new(d)?;
    let f = random_harmonic(dims, n, derive_seed(seed, &[d as u64, n as u64]))?;
    let points = test_points(d, cfg.test_points, derive_seed(seed, &[d as u64, n as u64, 1]));
    let tf = t_operator(dims, n, &f)?.eval_many(&points);
    let orig: Vec<f64> = points.iter().map(|x| f.eval(x)).collect();
    Ok(relative_max_error(&tf, &orig))
}

fn expansion(cfg: &ExperimentConfig, index: usize) -> Result<(usize, f64)> {
    let dims = DimensionParams::new(3)?;
    let base = cfg.seeds[0];
    let f = RidgePolynomial::random(dims, cfg.expansion_degree, 8, derive_seed(base, &[7, index as u64]));
    let n = 1 + (2 * index) % (cfg.expansion_degree.max(1));
    let points = test_points(3, cfg.test_points, derive_seed(base, &[8, index as u64]));
    let lhs = t_operator(dims, n, &f)?.eval_many(&points);
    let rhs = t_operator_expansion(dims, n, &f)?.eval_many(&points);
    Ok((n, relative_max_error(&lhs, &rhs)))
}

/// `proj_k ∘ proj_k` against `proj_k`, and `proj_m ∘ proj_k` against zero, on a ridge
/// polynomial; both measured relative to `max|proj_k f|`.
fn projections(cfg: &ExperimentConfig, d: usize, k: usize, m: usize) -> Result<(f64, f64)> {
    let dims = DimensionParams::new(d)?;
    let degree = cfg.expansion_degree.min(16);
    let f = RidgePolynomial::random(dims, degree, 8, derive_seed(cfg.seeds[0], &[9, d as u64, k as u64]));
    let rule = Arc::new(sphere_product_rule_with_cap(dims, degree + k.max(m), cfg.budget.max_sphere_nodes)?);
    let op = |j: usize, input: usize| {
        ZonalOperator::with_rule(OperatorKind::Projection { k: j }, ZonalKernel::projection(dims, j)?, Arc::clone(&rule), input)
    };
    let pk = op(k, degree)?.apply(&f)?;
    let pkk = op(k, degree)?.apply(&pk)?;
    let pmk = op(m, degree)?.apply(&pk)?;
    let points = test_points(d, cfg.test_points, derive_seed(cfg.seeds[0], &[10, d as u64]));
    let a = pk.eval_many(&points);
    let b = pkk.eval_many(&points);
    let c = pmk.eval_many(&points);
    let zeros = vec![0.0; c.len()];
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    Ok((relative_max_error(&b, &a), relative_max_error(&c, &zeros) / scale))
}

fn zonal_reduction(cfg: &ExperimentConfig, d: usize, n: usize) -> Result<f64> {
    let dims = DimensionParams::new(d)?;
    let g = RealHarmonic::new(HarmonicSpec::zonal(dims, n + 2), Part::Re);
    let full = t_operator(dims, n, &g)?;
    let phi = ZonalKernel::phi(dims, n)?;
    let profile = ZonalKernel::zonal_harmonic(dims, n + 2)?;
    let reduced = zonal_convolve(
        dims,
        |t| phi.eval_unchecked(t),
        phi.max_degree(),
        |t| profile.eval_unchecked(t),
        n + 2,
    )?;
    let points = test_points(d, cfg.test_points.min(50), derive_seed(cfg.seeds[0], &[11, d as u64]));
    let a = full.eval_many(&points);
    let b: Vec<f64> = points.iter().map(|x| reduced.eval_unchecked(x[d - 1])).collect();
    Ok(relative_max_error(&b, &a))
}

/// Test inputs `g_n`, `−g_n`, `g_{n+2}`, `g_n − g_{n+2}` as Jacobi expansions.
fn growth_inputs(dims: DimensionParams, n: usize) -> Result<Vec<(&'static str, ZonalKernel)>> {
    let a = ZonalKernel::zonal_harmonic(dims, n)?;
    let b = ZonalKernel::zonal_harmonic(dims, n + 2)?;
    let mut neg = vec![0.0; n + 1];
    neg[n] = -1.0;
    let mut diff = vec![0.0; n + 3];
    diff[n] = 1.0;
    diff[n + 2] = -1.0;
    use crate::special_fn::KernelKind;
    Ok(vec![
        ("g_n", a),
        ("-g_n", ZonalKernel::from_weights(dims, KernelKind::Custom, n, neg)?),
        ("g_n+2", b),
        ("g_n-g_n+2", ZonalKernel::from_weights(dims, KernelKind::Custom, n + 2, diff)?),
    ])
}

fn growth(cfg: &ExperimentConfig, d: usize) -> Result<Vec<ReportRow>> {
    let dims = DimensionParams::new(d)?;
    let lambda = dims.lambda();
    let per_n: Vec<Result<Vec<(&'static str, f64)>>> = cfg
        .growth_n_grid
        .par_iter()
        .map(|&n| {
            let phi = ZonalKernel::phi(dims, n)?;
            growth_inputs(dims, n)?
                .into_iter()
                .map(|(name, g)| {
                    let out = zonal_convolve(
                        dims,
                        |t| phi.eval_unchecked(t),
                        phi.max_degree(),
                        |t| g.eval_unchecked(t),
                        g.max_degree(),
                    )?;
                    let sup = zonal_sup(&out)?.value;
                    let l1 = zonal_l1_norm(&g)?;
                    Ok((name, sup / ((n as f64).powf(lambda) * l1)))
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    let mut by_input: Vec<(&'static str, Vec<f64>)> = Vec::new();
    for (&n, res) in cfg.growth_n_grid.iter().zip(per_n) {
        for (name, k) in res? {
            rows.push(ReportRow::info(SUITE, format!("d{d}/growth/{name}/n={n:04}"), k));
            match by_input.iter_mut().find(|(m, _)| *m == name) {
                Some((_, v)) => v.push(k),
                None => by_input.push((name, vec![k])),
            }
        }
    }
    for (name, values) in by_input {
        rows.push(
            ReportRow::at_most(SUITE, format!("d{d}/growth-band/{name}"), spread(&values), cfg.tolerances.band)
                .detail("max/min of |T_n g|_inf / (n^lambda |g|_1)"),
        );
    }
    Ok(rows)
}
