use rayon::prelude::*;

use super::rates::spec_for;
use crate::error::Result;
use crate::experiments::config::{ExperimentConfig, RatioPoint};
use crate::experiments::fit::{fit_slope, SlopeFit};
use crate::experiments::report::ReportRow;
use crate::exponents::{classify, family_ratio_slope, rational_to_f64, WitnessFamily};
use crate::harmonics::{lp_norm, NormBudget};
use crate::special_fn::DimensionParams;

const SUITE: &str = "ratios";

pub(crate) fn key(point: &RatioPoint) -> String {
    format!("d{}/p={}/q={}", point.d, point.p, point.q)
}

/// Slope of the witness family's `‖f_n‖_q/‖f_n‖_p` against the classified exponent. Open
/// cells and log-critical indices are refused.
pub(crate) fn verify_ratio(cfg: &ExperimentConfig, point: &RatioPoint) -> ReportRow {
    let key = key(point);
    let res = match classify(point.d, point.p, point.q) {
        Ok(r) => r,
        Err(e) => return ReportRow::failed(SUITE, key, e.to_string()),
    };
    let (Some(exponent), Some(witness)) = (res.exponent, res.witness) else {
        return ReportRow::refused(
            SUITE,
            key,
            format!("open region; only the Nikolskii rate {} is proven", res.nikolskii),
        );
    };
    match family_ratio_slope(point.d, witness, point.p, point.q) {
        Ok(s) if s.log_critical => {
            return ReportRow::refused(SUITE, key, format!("log-critical index for the {witness} family (regime {})", res.regime))
        }
        Ok(s) if s.slope != exponent => {
            return ReportRow::failed(SUITE, key, "witness slope disagrees with the regime exponent")
        }
        Ok(_) => {}
        Err(e) => return ReportRow::failed(SUITE, key, e.to_string()),
    }
    match ratio_fit(cfg, point, witness) {
        Ok(fit) => ReportRow::compare(SUITE, key, fit.slope, rational_to_f64(exponent), cfg.tolerances.slope)
            .detail(format!("regime={} witness={witness} max_residual={:.3e}", res.regime, fit.max_residual)),
        Err(e) => ReportRow::failed(SUITE, key, e.to_string()),
    }
}

fn ratio_fit(cfg: &ExperimentConfig, point: &RatioPoint, witness: WitnessFamily) -> Result<SlopeFit> {
    let dims = DimensionParams::new(point.d)?;
    let budget = NormBudget {
        max_sphere_nodes: cfg.budget.max_sphere_nodes,
        ..NormBudget::default()
    };
    let values = cfg
        .n_grid
        .par_iter()
        .map(|&n| {
            let spec = spec_for(dims, witness, n);
            let q = lp_norm(&spec, point.q.to_f64(), &budget)?.value;
            let p = lp_norm(&spec, point.p.to_f64(), &budget)?.value;
            Ok(q / p)
        })
        .collect::<Result<Vec<f64>>>()?;
    fit_slope(&cfg.n_grid, &values)
}

pub(crate) fn run(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    cfg.ratio_points.par_iter().map(|pt| verify_ratio(cfg, pt)).collect()
}

