use rayon::prelude::*;

use crate::error::Result;
use crate::experiments::config::ExperimentConfig;
use crate::experiments::fit::{fit_slope, SlopeFit};
use crate::experiments::report::ReportRow;
use crate::exponents::{family_slope, rational_to_f64, zonal_critical_index, LpIndex, WitnessFamily};
use crate::harmonics::{lp_norm, HarmonicSpec, NormBudget};
use crate::special_fn::DimensionParams;

const SUITE: &str = "rates";

pub(crate) fn spec_for(dims: DimensionParams, family: WitnessFamily, n: usize) -> HarmonicSpec {
    match family {
        WitnessFamily::Power => HarmonicSpec::power(dims, n),
        WitnessFamily::Zonal => HarmonicSpec::zonal(dims, n),
    }
}

/// `‖f_n‖_p` over the degree grid and its log–log fit.
pub(crate) fn family_fit(
    cfg: &ExperimentConfig,
    d: usize,
    family: WitnessFamily,
    p: LpIndex,
) -> Result<SlopeFit> {
    let dims = DimensionParams::new(d)?;
    let budget = NormBudget {
        max_sphere_nodes: cfg.budget.max_sphere_nodes,
        ..NormBudget::default()
    };
    let values = cfg
        .n_grid
        .par_iter()
        .map(|&n| Ok(lp_norm(&spec_for(dims, family, n), p.to_f64(), &budget)?.value))
        .collect::<Result<Vec<f64>>>()?;
    fit_slope(&cfg.n_grid, &values)
}

/// Slopes of `log ‖f_n‖_p` for the power family at every configured `p` and for the zonal
/// family at `p = 2` and at twice the critical index.
pub(crate) fn run(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let mut tasks: Vec<(usize, WitnessFamily, LpIndex)> = Vec::new();
    for &d in &cfg.dims {
        for &p in &cfg.p_list {
            tasks.push((d, WitnessFamily::Power, p));
        }
        let two = LpIndex::integer(2).expect("literal");
        tasks.push((d, WitnessFamily::Zonal, two));
        let pc = zonal_critical_index(d).expect("d >= 3").reciprocal();
        tasks.push((d, WitnessFamily::Zonal, LpIndex::from_reciprocal(pc / 2).expect("positive")));
    }
    tasks
        .par_iter()
        .map(|&(d, family, p)| {
            let key = format!("d{d}/{family}/p={p}");
            let predicted = match family_slope(d, family, p) {
                Ok(s) if s.log_critical => {
                    return ReportRow::refused(SUITE, key, "log-critical index; not fitted")
                }
                Ok(s) => rational_to_f64(s.slope),
                Err(e) => return ReportRow::failed(SUITE, key, e.to_string()),
            };
            match family_fit(cfg, d, family, p) {
                Ok(fit) => ReportRow::compare(SUITE, key, fit.slope, predicted, cfg.tolerances.slope)
                    .detail(format!("max_residual={:.3e} tail_slope={:.4}", fit.max_residual, tail_slope(&fit))),
                Err(e) => ReportRow::failed(SUITE, key, e.to_string()),
            }
        })
        .collect()
}

/// Slope between the last two grid points.
pub(crate) fn tail_slope(fit: &SlopeFit) -> f64 {
    let m = fit.n_grid.len();
    let (n0, n1) = (fit.n_grid[m - 2] as f64, fit.n_grid[m - 1] as f64);
    (fit.values[m - 1] / fit.values[m - 2]).ln() / (n1 / n0).ln()
}
