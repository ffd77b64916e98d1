use crate::experiments::config::ExperimentConfig;
use crate::experiments::report::ReportRow;
use crate::exponents::{
    admissible_regimes, boundary_points, classify, family_ratio_slope, in_open_rectangle,
    pitt_constant, rational_to_f64, regime_grid, restriction_exponent, restriction_q_edge,
    restriction_sweep, LpIndex, PittRatio, Rational, Regime,
};

const SUITE: &str = "exponents";

/// Audits of the exponent table: partition, continuity, Nikolskii domination, monotonicity,
/// witness consistency, the restriction sweep and the Pitt normalization.
pub(crate) fn run(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let exact = cfg.tolerances.exact;
    let mut rows = Vec::new();
    for &d in &cfg.dims {
        let points: Vec<(LpIndex, LpIndex)> = regime_grid().into_iter().chain(boundary_points(d)).collect();
        let mut partition_violations = 0usize;
        let mut continuity: f64 = 0.0;
        let mut domination = f64::NEG_INFINITY;
        let mut witness_mismatch = 0usize;
        for &(p, q) in &points {
            let Ok(res) = classify(d, p, q) else {
                partition_violations += 1;
                continue;
            };
            let admissible = admissible_regimes(d, p, q).unwrap_or_default();
            let open_ok = (res.regime == Regime::Open) == in_open_rectangle(d, p, q);
            if !open_ok || (res.regime != Regime::Open && !admissible.contains(&res.regime)) {
                partition_violations += 1;
            }
            let (u, v) = (p.reciprocal(), q.reciprocal());
            let values: Vec<f64> = admissible
                .iter()
                .filter_map(|g| g.formula(d, u, v))
                .map(rational_to_f64)
                .collect();
            if let (Some(lo), Some(hi)) = (
                values.iter().copied().reduce(f64::min),
                values.iter().copied().reduce(f64::max),
            ) {
                continuity = continuity.max(hi - lo);
            }
            if let (Some(e), Some(w)) = (res.exponent, res.witness) {
                domination = domination.max(rational_to_f64(e - res.nikolskii));
                if family_ratio_slope(d, w, p, q).map_or(true, |s| s.slope != e) {
                    witness_mismatch += 1;
                }
            }
        }
        rows.push(ReportRow::at_most(SUITE, format!("d{d}/partition"), partition_violations as f64, 0.0)
            .detail(format!("{} grid and boundary points", points.len())));
        rows.push(ReportRow::at_most(SUITE, format!("d{d}/continuity"), continuity, exact)
            .detail("largest disagreement of admissible formulas"));
        rows.push(ReportRow::at_most(SUITE, format!("d{d}/nikolskii-domination"), domination, exact)
            .detail("max of exponent - nikolskii"));
        rows.push(ReportRow::at_most(SUITE, format!("d{d}/witness"), witness_mismatch as f64, 0.0));
        rows.push(ReportRow::at_most(SUITE, format!("d{d}/monotonicity"), monotonicity_violations(d) as f64, 0.0));

        match restriction_sweep(d, 200) {
            Ok(s) => rows.push(
                ReportRow::at_most(SUITE, format!("d{d}/restriction-sweep"), rational_to_f64(s.max_exponent), 0.0)
                    .detail(format!("{} points", s.points)),
            ),
            Err(e) => rows.push(ReportRow::failed(SUITE, format!("d{d}/restriction-sweep"), e.to_string())),
        }
        let edge = LpIndex::finite(Rational::new(2 * d as i64, d as i64 + 1))
            .and_then(|p| Ok((p, restriction_q_edge(d, p)?)))
            .and_then(|(p, q)| restriction_exponent(d, p, q));
        rows.push(match edge {
            Ok(v) => ReportRow::compare(SUITE, format!("d{d}/restriction-edge"), rational_to_f64(v.exponent), 0.0, exact),
            Err(e) => ReportRow::failed(SUITE, format!("d{d}/restriction-edge"), e.to_string()),
        });
        let target = (2.0 * std::f64::consts::PI).powf(d as f64 / 2.0);
        rows.push(match pitt_constant(d, 0, 2.0, PittRatio::Empirical(1.0)) {
            Ok(c) => ReportRow::at_most(SUITE, format!("d{d}/pitt-normalization"), (c.value - target).abs() / target, exact)
                .detail("relative error vs (2pi)^(d/2)"),
            Err(e) => ReportRow::failed(SUITE, format!("d{d}/pitt-normalization"), e.to_string()),
        });
    }
    let one = LpIndex::integer(1).expect("literal");
    let two = LpIndex::integer(2).expect("literal");
    rows.push(match classify(3, one, two) {
        Ok(r) => match r.gap() {
            Some(g) => ReportRow::compare(SUITE, "d3/gap/p=1/q=2", rational_to_f64(g), 0.75, exact)
                .detail(format!("exponent {} vs nikolskii {}", r.exponent.unwrap_or_default(), r.nikolskii)),
            None => ReportRow::failed(SUITE, "d3/gap/p=1/q=2", "unexpected open cell"),
        },
        Err(e) => ReportRow::failed(SUITE, "d3/gap/p=1/q=2", e.to_string()),
    });
    rows
}

/// Neighbours on the `(i/14, j/14)` grid in the same regime whose exponents move the wrong
/// way: decreasing in `1/p` or increasing in `1/q`.
fn monotonicity_violations(d: usize) -> usize {
    let at = |i: i64, j: i64| {
        classify(
            d,
            LpIndex::from_reciprocal(Rational::new(i, 14)).ok()?,
            LpIndex::from_reciprocal(Rational::new(j, 14)).ok()?,
        )
        .ok()
    };
    let mut bad = 0;
    for i in 1..=28i64 {
        for j in 0..i {
            let Some(here) = at(i, j) else { continue };
            let Some(e) = here.exponent else { continue };
            if let Some(next) = at(i + 1, j).filter(|r| r.regime == here.regime && i < 28) {
                if next.exponent.is_some_and(|x| x < e) {
                    bad += 1;
                }
            }
            if let Some(next) = at(i, j + 1).filter(|r| r.regime == here.regime && j + 1 < i) {
                if next.exponent.is_some_and(|x| x > e) {
                    bad += 1;
                }
            }
        }
    }
    bad
}
