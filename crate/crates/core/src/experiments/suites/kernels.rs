use rayon::prelude::*;

use super::{row_or_fail, spread};
use crate::error::Result;
use crate::experiments::config::ExperimentConfig;
use crate::experiments::report::ReportRow;
use crate::special_fn::{difference_bound_constant, kernel_bound_constant, DimensionParams};

const SUITE: &str = "kernels";

/// Band stability of `sup|Φ_n|/n^λ` (max/min) and of the step-2 difference bound with
/// `ℓ = d−2` (max/median) across the kernel degree grid.
pub(crate) fn run(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    cfg.dims
        .par_iter()
        .flat_map_iter(|&d| {
            let rows = dimension_rows(cfg, d);
            rows.unwrap_or_else(|e| vec![ReportRow::failed(SUITE, format!("d{d}"), e.to_string())])
        })
        .collect()
}

fn dimension_rows(cfg: &ExperimentConfig, d: usize) -> Result<Vec<ReportRow>> {
    let dims = DimensionParams::new(d)?;
    let ell = d - 2;
    let mut rows = Vec::new();
    let phi: Vec<Result<f64>> = cfg.kernel_n_grid.par_iter().map(|&n| kernel_bound_constant(dims, n)).collect();
    let diff: Vec<Result<f64>> = cfg
        .kernel_n_grid
        .par_iter()
        .map(|&n| difference_bound_constant(dims, ell, n))
        .collect();
    let mut phi_ok = Vec::new();
    let mut diff_ok = Vec::new();
    for ((&n, a), b) in cfg.kernel_n_grid.iter().zip(phi).zip(diff) {
        let key = format!("d{d}/phi-constant/n={n:04}");
        rows.push(row_or_fail(SUITE, key, a.map(|v| {
            phi_ok.push(v);
            ReportRow::info(SUITE, format!("d{d}/phi-constant/n={n:04}"), v)
        })));
        let key = format!("d{d}/difference-constant/n={n:04}");
        rows.push(row_or_fail(SUITE, key, b.map(|v| {
            diff_ok.push(v);
            ReportRow::info(SUITE, format!("d{d}/difference-constant/n={n:04}"), v)
        })));
    }
    let complete = phi_ok.len() == cfg.kernel_n_grid.len() && diff_ok.len() == cfg.kernel_n_grid.len();
    if !complete {
        rows.push(ReportRow::failed(SUITE, format!("d{d}/bands"), "missing constants"));
        return Ok(rows);
    }
    rows.push(
        ReportRow::at_most(SUITE, format!("d{d}/phi-band"), spread(&phi_ok), cfg.tolerances.band)
            .detail("max/min of sup|Phi_n| n^-lambda"),
    );
    let mut sorted = diff_ok.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let max = sorted[sorted.len() - 1];
    rows.push(
        ReportRow::at_most(SUITE, format!("d{d}/difference-band"), max / median, cfg.tolerances.band)
            .detail(format!("max/median, ell={ell}")),
    );
    Ok(rows)
}
