//! Verification harness: slope fits of norm ratios against predicted exponents, band
//! audits of kernel constants, operator identity checks, and CSV/JSON reports.

mod config;
mod fit;
mod report;
mod suites;

pub use config::{Budget, ExperimentConfig, Outputs, RatioPoint, Suite, Tolerances};
pub use fit::{fit_slope, SlopeFit};
pub use report::{Report, ReportRow, Status};

use crate::error::{Error, Result};
use crate::exponents::{LpIndex, RateTable, WitnessFamily};

/// Runs the configured suites in order and writes the configured outputs.
///
/// The config (including the budget) is validated before anything is computed. Rows are
/// sorted by `(suite, key)`, so identical configs give byte-identical reports.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::default();
    let mut selected = cfg.suites.clone();
    selected.sort();
    selected.dedup();
    for suite in selected {
        let rows = match suite {
            Suite::Kernels => suites::kernels::run(cfg),
            Suite::Quadrature => suites::quadrature::run(cfg),
            Suite::Operators => suites::operators::run(cfg),
            Suite::Rates => suites::rates::run(cfg),
            Suite::Ratios => suites::ratios::run(cfg),
            Suite::Exponents => {
                if let Some(path) = &cfg.output.rates_csv {
                    let table = RateTable::build(&cfg.dims, &crate::exponents::default_indices())?;
                    table.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))?;
                }
                suites::exponents::run(cfg)
            }
        };
        report.extend(rows);
    }
    if let Some(path) = &cfg.output.csv {
        report.save_csv(path)?;
    }
    if let Some(path) = &cfg.output.json {
        report.save_json(path)?;
    }
    Ok(report)
}

/// Fits the slope of `log ‖f_n‖_p` for one family and compares it with the prediction.
pub fn verify_family_rate(
    cfg: &ExperimentConfig,
    d: usize,
    family: WitnessFamily,
    p: LpIndex,
) -> Result<ReportRow> {
    cfg.validate()?;
    let predicted = crate::exponents::family_slope(d, family, p)?;
    let key = format!("d{d}/{family}/p={p}");
    if predicted.log_critical {
        return Ok(ReportRow::refused("rates", key, "log-critical index; not fitted"));
    }
    let fit = suites::rates::family_fit(cfg, d, family, p)?;
    Ok(ReportRow::compare(
        "rates",
        key,
        fit.slope,
        crate::exponents::rational_to_f64(predicted.slope),
        cfg.tolerances.slope,
    )
    .detail(format!("max_residual={:.3e}", fit.max_residual)))
}

/// Fits the witness-family ratio slope at `(d, p, q)`; open and log-critical cells come
/// back as refused rows.
pub fn verify_ratio_lower_bounds(cfg: &ExperimentConfig, d: usize, p: LpIndex, q: LpIndex) -> Result<ReportRow> {
    cfg.validate()?;
    if p >= q {
        return Err(Error::Domain(format!("need p < q, got p={p}, q={q}")));
    }
    Ok(suites::ratios::verify_ratio(cfg, &RatioPoint { d, p, q }))
}

/// Exit status for a finished run: 0 if nothing failed, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}

/// Exit status for an error: 2 for configuration, budget and argument problems, 1 otherwise.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Budget { .. }
        | Error::Parse(_)
        | Error::Json(_)
        | Error::InvalidParameter(_)
        | Error::Domain(_)
        | Error::DimensionTooLarge { .. } => 2,
        _ => 1,
    }
}
