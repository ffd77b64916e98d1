use rayon::prelude::*;

use super::row_or_fail;
use crate::error::Result;
use crate::experiments::config::ExperimentConfig;
use crate::experiments::report::ReportRow;
use crate::quadrature::{
    gauss_jacobi, gauss_ultraspherical, periodic_uniform, sphere_monomial_integral,
    sphere_product_rule_with_cap, QuadratureRule,
};
use crate::special_fn::{jacobi_l2_norm_squared, ln_beta, DimensionParams, JacobiRecurrence};

const SUITE: &str = "quadrature";

/// Rebuilds a family of rules and audits them against moments computed independently of
/// their construction: Beta-function moments, Jacobi orthogonality by forward recurrence,
/// trigonometric sums, and closed-form sphere monomial integrals.
pub(crate) fn run(cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let mut tasks: Vec<Task> = Vec::new();
    for &d in &cfg.dims {
        for n in [1usize, 2, 5, 16, 64, 256] {
            tasks.push(Task::Ultraspherical { d, n });
        }
        for degree in [1usize, 4, 9, 16, 24] {
            tasks.push(Task::Sphere { d, degree });
        }
    }
    for (alpha, beta) in [(0.0, 0.0), (-0.5, 0.5), (1.5, -0.3), (2.0, 3.0), (-0.9, -0.9)] {
        for n in [3usize, 20, 64] {
            tasks.push(Task::Jacobi { alpha, beta, n });
        }
    }
    for m in [1usize, 7, 64] {
        tasks.push(Task::Periodic { m });
    }
    tasks
        .par_iter()
        .map(|task| row_or_fail(SUITE, task.key(), task.run(cfg)))
        .collect()
}

enum Task {
    Ultraspherical { d: usize, n: usize },
    Jacobi { alpha: f64, beta: f64, n: usize },
    Periodic { m: usize },
    Sphere { d: usize, degree: usize },
}

impl Task {
    fn key(&self) -> String {
        match self {
            Task::Ultraspherical { d, n } => format!("d{d}/ultraspherical/n={n:04}"),
            Task::Jacobi { alpha, beta, n } => format!("jacobi/a={alpha:+.2}/b={beta:+.2}/n={n:04}"),
            Task::Periodic { m } => format!("periodic/m={m:04}"),
            Task::Sphere { d, degree } => format!("d{d}/sphere/degree={degree:02}"),
        }
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<ReportRow> {
        let tol = cfg.tolerances.audit;
        Ok(match *self {
            Task::Ultraspherical { d, n } => {
                let dims = DimensionParams::new(d)?;
                let rule = gauss_ultraspherical(dims, n)?;
                ReportRow::at_most(SUITE, self.key(), even_moment_error(&rule, dims.jacobi_index()), tol)
                    .detail(format!("monomials t^k, k<={}", 2 * n - 1))
            }
            Task::Jacobi { alpha, beta, n } => {
                let rule = gauss_jacobi(alpha, beta, n)?;
                ReportRow::at_most(SUITE, self.key(), orthogonality_error(&rule, alpha, beta)?, tol)
                    .detail(format!("P_k, k<={}", 2 * n - 1))
            }
            Task::Periodic { m } => {
                let rule = periodic_uniform(m)?;
                let mut worst = (rule.total_weight() - 2.0 * std::f64::consts::PI).abs() / (2.0 * std::f64::consts::PI);
                for k in 1..m {
                    let (mut c, mut s) = (0.0, 0.0);
                    for (&phi, &w) in rule.abscissae().iter().zip(rule.weights()) {
                        c += w * (k as f64 * phi).cos();
                        s += w * (k as f64 * phi).sin();
                    }
                    worst = worst.max(c.abs().max(s.abs()) / (2.0 * std::f64::consts::PI));
                }
                ReportRow::at_most(SUITE, self.key(), worst, tol)
            }
            Task::Sphere { d, degree } => {
                let dims = DimensionParams::new(d)?;
                let rule = sphere_product_rule_with_cap(dims, degree, cfg.budget.max_sphere_nodes)?;
                let area = dims.sphere_area();
                let area_error = (rule.total_weight() - area).abs() / area;
                if area_error > cfg.tolerances.exact {
                    return Ok(ReportRow::at_most(SUITE, self.key(), area_error, cfg.tolerances.exact)
                        .detail("total weight vs sphere area"));
                }
                ReportRow::at_most(SUITE, self.key(), sphere_moment_error(&rule, d, degree.min(6)), tol)
                    .detail(format!("area error {area_error:.3e}; monomials of degree <={}", degree.min(6)))
            }
        })
    }
}

/// Relative error on `∫ t^k (1−t²)^a dt`; odd moments are measured against the mass.
fn even_moment_error(rule: &QuadratureRule, a: f64) -> f64 {
    let top = 2 * rule.len() - 1;
    let mass = ln_beta(0.5, a + 1.0).exp();
    let mut worst: f64 = 0.0;
    for k in 0..=top {
        let q: f64 = rule.abscissae().iter().zip(rule.weights()).map(|(t, w)| w * t.powi(k as i32)).sum();
        let err = if k % 2 == 1 {
            q.abs() / mass
        } else {
            let exact = ln_beta((k as f64 + 1.0) / 2.0, a + 1.0).exp();
            (q - exact).abs() / exact
        };
        worst = worst.max(err);
    }
    worst
}

/// `|Q(P_k)| / √(h_k · mass)` for `1 ≤ k ≤ 2N−1` (the scale bounds `∫|P_k| w`), and the
/// relative mass error for `k = 0`.
fn orthogonality_error(rule: &QuadratureRule, alpha: f64, beta: f64) -> Result<f64> {
    let top = 2 * rule.len() - 1;
    let rec = JacobiRecurrence::new(alpha, beta, top)?;
    let mut values = vec![0.0; top + 1];
    let mut sums = vec![0.0; top + 1];
    for (&t, &w) in rule.abscissae().iter().zip(rule.weights()) {
        rec.eval_into(t, &mut values);
        for k in 0..=top {
            sums[k] += w * values[k];
        }
    }
    let mass = jacobi_l2_norm_squared(0, alpha, beta)?;
    let mut worst = (sums[0] - mass).abs() / mass;
    for k in 1..=top {
        let scale = (jacobi_l2_norm_squared(k, alpha, beta)? * mass).sqrt();
        worst = worst.max(sums[k].abs() / scale);
    }
    Ok(worst)
}

/// All monomials of total degree `≤ max_total`: vanishing moments relative to the area,
/// the others relative to their exact value.
fn sphere_moment_error(rule: &QuadratureRule, d: usize, max_total: usize) -> f64 {
    let area = sphere_monomial_integral(&vec![0; d]);
    let mut exps = vec![0usize; d];
    let mut worst: f64 = 0.0;
    loop {
        let total: usize = exps.iter().sum();
        if total <= max_total {
            let q: f64 = rule
                .nodes()
                .zip(rule.weights())
                .map(|(x, w)| w * x.iter().zip(&exps).map(|(xi, &e)| xi.powi(e as i32)).product::<f64>())
                .sum();
            let exact = sphere_monomial_integral(&exps);
            let err = if exact == 0.0 { q.abs() / area } else { (q - exact).abs() / exact };
            worst = worst.max(err);
        }
        let mut i = 0;
        loop {
            if i == d {
                return worst;
            }
            exps[i] += 1;
            if exps[i] <= max_total {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}
