//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};

use sphrh::experiments::{run_suite, ExperimentConfig, ReportRow, Status, Suite};
use sphrh::exponents::{
    boundary_points, classify, nikolskii_rate, pitt_constant, rational_to_f64, regime_grid,
    restriction_exponent, restriction_q_edge, restriction_sweep, LpIndex, PittRatio, Regime,
};
use sphrh::quadrature::sphere_product_rule;
use sphrh::DimensionParams;

struct Outcome {
    passed: bool,
    summary: String,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self {
            passed,
            summary: summary.into(),
        }
    }
}

/// Rows of `suite` whose key satisfies `select`; they must number `expected` and all pass.
fn rows_pass(
    rows: &[ReportRow],
    suite: &str,
    expected: usize,
    select: impl Fn(&str) -> bool,
) -> Outcome {
    let chosen: Vec<&ReportRow> = rows
        .iter()
        .filter(|r| r.suite == suite && select(&r.key))
        .collect();
    let failing: Vec<String> = chosen
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| {
            let measured = r.measured.map_or("-".into(), |v| format!("{v:.4}"));
            let predicted = r.predicted.map_or("-".into(), |v| format!("{v:.4}"));
            format!("{} measured={measured} predicted={predicted}", r.key)
        })
        .collect();
    let deviation = |r: &ReportRow| match (r.measured, r.predicted) {
        (Some(m), Some(p)) => (m - p).abs(),
        (Some(m), None) => m.abs(),
        _ => 0.0,
    };
    let worst = chosen
        .iter()
        .max_by(|a, b| deviation(a).total_cmp(&deviation(b)))
        .map(|r| {
            let predicted = r.predicted.map_or(String::new(), |v| format!(" vs {v:.4}"));
            format!("{} {:.4e}{predicted}", r.key, r.measured.unwrap_or(f64::NAN))
        })
        .unwrap_or_default();
    let passed = chosen.len() == expected && failing.is_empty();
    let mut summary = format!("{}/{} rows pass, extreme row {worst}", chosen.len() - failing.len(), expected);
    if chosen.len() != expected {
        summary.push_str(&format!(" (found {} rows)", chosen.len()));
    }
    if !failing.is_empty() {
        summary.push_str(&format!("; failing: {}", failing.join(", ")));
    }
    Outcome::new(passed, summary)
}

fn idx(s: &str) -> LpIndex {
    s.parse().unwrap()
}

fn criterion_7(rows: &[ReportRow]) -> Outcome {
    let listed = [
        "d3/p=1/q=2",
        "d3/p=2/q=4",
        "d3/p=2/q=inf",
        "d3/p=1/q=inf",
        "d3/p=5/q=inf",
        "d4/p=1/q=2",
        "d4/p=1/q=inf",
        "d4/p=4/q=inf",
    ];
    let base = rows_pass(rows, "ratios", listed.len(), |k| listed.contains(&k));
    // Regime coverage over every fitted ratio row.
    let mut covered: Vec<Regime> = Vec::new();
    for row in rows.iter().filter(|r| r.suite == "ratios" && r.status == Status::Pass) {
        let (d, rest) = row.key[1..].split_once("/p=").unwrap();
        let (p, q) = rest.split_once("/q=").unwrap();
        let (d, p, q): (usize, _, _) = (d.parse().unwrap(), idx(p), idx(q));
        let regime = classify(d, p, q).unwrap().regime;
        if !covered.contains(&regime) {
            covered.push(regime);
        }
    }
    let wanted = [Regime::I, Regime::II, Regime::III, Regime::IvHigh, Regime::IvLow];
    let missing: Vec<&str> = wanted.iter().filter(|r| !covered.contains(r)).map(|r| r.tag()).collect();
    let summary = if missing.is_empty() {
        format!("{}; regimes i, ii, iii, iv-high, iv-low all fitted", base.summary)
    } else {
        format!("{}; regimes without a passing fit: {}", base.summary, missing.join(", "))
    };
    Outcome::new(base.passed && missing.is_empty(), summary)
}

fn criterion_8() -> Outcome {
    let tol = 1e-12;
    let mut worst_continuity = 0.0f64;
    let mut worst_domination = f64::NEG_INFINITY;
    let mut partition_ok = true;
    for d in 3..=5 {
        let mut points = regime_grid();
        points.extend(boundary_points(d));
        for (p, q) in points {
            if p >= q {
                continue;
            }
            let res = classify(d, p, q).unwrap();
            let open = res.regime == Regime::Open;
            if open != res.exponent.is_none() || (open && d == 3) {
                partition_ok = false;
            }
            let Some(e) = res.exponent else { continue };
            let (u, v) = (p.reciprocal(), q.reciprocal());
            for regime in sphrh::exponents::admissible_regimes(d, p, q).unwrap() {
                if let Some(other) = regime.formula(d, u, v) {
                    worst_continuity = worst_continuity.max(rational_to_f64(other - e).abs());
                }
            }
            let nik = nikolskii_rate(d, p, q).unwrap();
            worst_domination = worst_domination.max(rational_to_f64(e - nik));
        }
    }
    let gap = classify(3, idx("1"), idx("2")).unwrap().gap().map(rational_to_f64);
    let gap_ok = gap.is_some_and(|g| (g - 0.75).abs() <= tol);
    Outcome::new(
        partition_ok && worst_continuity <= tol && worst_domination <= tol && gap_ok,
        format!(
            "partition {}; continuity {worst_continuity:.1e}; max(exponent - nikolskii) {worst_domination:.3}; gap {:?}",
            if partition_ok { "ok" } else { "broken" },
            gap
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for d in 3..=5 {
        let sweep = restriction_sweep(d, 200).unwrap();
        let p = LpIndex::finite(num_rational::Ratio::new(2 * d as i64, d as i64 + 1)).unwrap();
        let q = restriction_q_edge(d, p).unwrap();
        let edge = rational_to_f64(restriction_exponent(d, p, q).unwrap().exponent);
        ok &= sweep.points == 40_000 && sweep.all_bounded && edge.abs() <= 1e-12;
        notes.push(format!("d{d}: {} points, max E {}, edge E {edge:.1e}", sweep.points, sweep.max_exponent));
    }
    Outcome::new(ok, notes.join("; "))
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    for d in 3..=5 {
        let c = pitt_constant(d, 0, 2.0, PittRatio::Empirical(1.0)).unwrap();
        let expected = (2.0 * std::f64::consts::PI).powf(d as f64 / 2.0);
        worst = worst.max((c.value - expected).abs() / expected);
    }
    Outcome::new(worst <= 1e-12, format!("max relative error {worst:.2e}"))
}

fn criterion_11(rows: &[ReportRow]) -> Outcome {
    let audits = rows.iter().filter(|r| r.suite == "quadrature").count();
    let base = rows_pass(rows, "quadrature", audits, |_| true);
    let mut worst = 0.0f64;
    for (d, area) in [(3, 4.0 * std::f64::consts::PI), (4, 2.0 * std::f64::consts::PI.powi(2))] {
        for degree in [0, 1, 7, 20] {
            let rule = sphere_product_rule(DimensionParams::new(d).unwrap(), degree).unwrap();
            worst = worst.max((rule.total_weight() - area).abs() / area);
        }
    }
    Outcome::new(
        audits > 0 && base.passed && worst <= 1e-12,
        format!("{}; sphere area relative error {worst:.2e}", base.summary),
    )
}

fn criterion_12() -> Outcome {
    let dir = std::env::temp_dir().join(format!("sphrh-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let csv = dir.join(format!("run{run}.csv"));
        let json = dir.join(format!("run{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_sphrh"))
            .args(["verify", "--suite", "all", "--csv"])
            .arg(&csv)
            .arg("--json")
            .arg(&json)
            .output()
            .unwrap()
            .status;
        outputs.push((
            status.code(),
            std::fs::read(&csv).unwrap_or_default(),
            std::fs::read(&json).unwrap_or_default(),
        ));
    }
    std::fs::remove_dir_all(&dir).ok();
    let (a, b) = (&outputs[0], &outputs[1]);
    let nonempty = !a.1.is_empty() && !a.2.is_empty();
    let same = a.1 == b.1 && a.2 == b.2 && a.0 == b.0;
    Outcome::new(
        nonempty && same,
        format!(
            "two runs: csv {} bytes, json {} bytes, {}",
            a.1.len(),
            a.2.len(),
            if same { "byte-identical" } else { "different" }
        ),
    )
}

fn main() -> ExitCode {
    let cfg = ExperimentConfig {
        suites: Suite::ALL.to_vec(),
        ..ExperimentConfig::default()
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL all criteria: suite run aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    let rows = &report.rows;
    let in_dims = |key: &str, dims: &[usize]| dims.iter().any(|d| key.starts_with(&format!("d{d}/")));

    let criteria: Vec<(&str, Outcome)> = vec![
        (
            "1 reproducing identity T_n P = P (d=3,4; n=2,4,8,16,24; 3 seeds; 1e-8)",
            rows_pass(rows, "operators", 30, |k| in_dims(k, &[3, 4]) && k.contains("/reproduce/")),
        ),
        (
            "2 expansion identity, 10 polynomials of degree <=24, d=3 (1e-8)",
            rows_pass(rows, "operators", 10, |k| k.starts_with("d3/expansion/")),
        ),
        (
            "3 kernel bound band sup|Phi_n| n^-lambda, n=8..512, d=3,4,5 (max/min <= 4)",
            rows_pass(rows, "kernels", 3, |k| k.ends_with("/phi-band")),
        ),
        (
            "4 difference bound band, l=d-2, d=3,4,5 (max/min <= 4)",
            rows_pass(rows, "kernels", 3, |k| k.ends_with("/difference-band")),
        ),
        (
            "5 power family slopes -lambda/p, p=1/2,1,2,4, d=3,4,5 (+-0.05)",
            rows_pass(rows, "rates", 12, |k| k.contains("/power/")),
        ),
        (
            "6 zonal family slopes, super- and subcritical, d=3,4,5 (+-0.05)",
            rows_pass(rows, "rates", 6, |k| k.contains("/zonal/")),
        ),
        ("7 witness ratio slopes vs classify exponents (+-0.05)", criterion_7(rows)),
        ("8 exponent table: partition, continuity, Nikolskii domination, gap 3/4", criterion_8()),
        ("9 restriction sweep E <= 0, 200x200 per d, edge E = 0", criterion_9()),
        ("10 Pitt constant at k=0, p=2 equals (2pi)^(d/2)", criterion_10()),
        ("11 quadrature moment audits and sphere areas", criterion_11(rows)),
        ("12 determinism of verify --suite all", criterion_12()),
    ];

    let mut all = true;
    for (name, outcome) in &criteria {
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", outcome.summary);
        all &= outcome.passed;
    }
    let passed = criteria.iter().filter(|(_, o)| o.passed).count();
    println!("{passed}/{} criteria pass", criteria.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
