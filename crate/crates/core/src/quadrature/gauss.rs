use std::f64::consts::{LN_2, PI};

use super::{compensated_sum, NeumaierSum, QuadratureRule, RuleKind};
use crate::error::{Error, Result};
use crate::special_fn::{ln_gamma, DimensionParams};

/// Relative tolerance of the moment audit run on every constructed rule.
pub const AUDIT_TOLERANCE: f64 = 1e-10;

const MAX_QL_ITERATIONS: usize = 60;
const NEWTON_STEPS: usize = 6;

/// Three-term recurrence of the orthonormal Jacobi polynomials:
/// `t p_k = √b_{k+1} p_{k+1} + a_k p_k + √b_k p_{k−1}`.
struct Orthonormal {
    a: Vec<f64>,
    /// `sqrt_b[k] = √b_k` for `k ≥ 1`; `sqrt_b[0]` unused.
    sqrt_b: Vec<f64>,
    p0: f64,
    mu0: f64,
}

impl Orthonormal {
    fn new(alpha: f64, beta: f64, len: usize) -> Self {
        let ab = alpha + beta;
        let a = (0..len)
            .map(|k| {
                if k == 0 {
                    (beta - alpha) / (ab + 2.0)
                } else {
                    let s = 2.0 * k as f64 + ab;
                    (beta * beta - alpha * alpha) / (s * (s + 2.0))
                }
            })
            .collect();
        let sqrt_b = (0..len)
            .map(|k| match k {
                0 => 0.0,
                1 => (4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0).powi(2) * (ab + 3.0)))
                    .sqrt(),
                _ => {
                    let k = k as f64;
                    let s = 2.0 * k + ab;
                    (4.0 * k * (k + alpha) * (k + beta) * (k + ab)
                        / (s * s * (s + 1.0) * (s - 1.0)))
                        .sqrt()
                }
            })
            .collect();
        let ln_mu0 = (ab + 1.0) * LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
            - ln_gamma(ab + 2.0);
        let mu0 = ln_mu0.exp();
        Self {
            a,
            sqrt_b,
            p0: 1.0 / mu0.sqrt(),
            mu0,
        }
    }

    /// `(p_n(t), p_n'(t))` together with `Σ_{k<n} p_k(t)²`.
    fn eval_with_derivative(&self, n: usize, t: f64) -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut p = self.p0;
        let mut dp_prev = 0.0;
        let mut dp = 0.0;
        let mut sum_sq = 0.0;
        for k in 0..n {
            sum_sq += p * p;
            let sb = if k == 0 { 0.0 } else { self.sqrt_b[k] };
            let next = ((t - self.a[k]) * p - sb * p_prev) / self.sqrt_b[k + 1];
            let dnext = (p + (t - self.a[k]) * dp - sb * dp_prev) / self.sqrt_b[k + 1];
            p_prev = p;
            p = next;
            dp_prev = dp;
            dp = dnext;
        }
        (p, dp, sum_sq)
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and sub-diagonal
/// `off[1..]` by implicit QL with Wilkinson shifts.
fn tridiagonal_eigenvalues(mut diag: Vec<f64>, off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[1..n]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::Convergence {
                    what: "tridiagonal QL eigenvalue iteration".into(),
                    iterations: MAX_QL_ITERATIONS,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(diag)
}

/// Gauss–Jacobi rule with `num_nodes` nodes for the weight `(1−t)^α (1+t)^β` on `[−1, 1]`.
///
/// Nodes are eigenvalues of the Jacobi matrix polished by Newton steps on the orthonormal
/// polynomial; weights come from the Christoffel function `1/Σ_{k<N} p_k(x)²`. The rule is
/// exact through degree `2N−1`, which is checked against the orthonormal moments
/// `∫ p_k w = √μ₀ δ_{k0}` before the rule is returned.
pub fn gauss_jacobi(alpha: f64, beta: f64, num_nodes: usize) -> Result<QuadratureRule> {
    build_gauss_jacobi(alpha, beta, num_nodes, RuleKind::GaussJacobi { alpha, beta }, None)
}

/// Gauss rule for `∫ f(t)(1−t²)^{(d−3)/2} dt`, the zonal reduction of `dσ` on `S^{d−1}`.
pub fn gauss_ultraspherical(dims: DimensionParams, num_nodes: usize) -> Result<QuadratureRule> {
    let a = dims.jacobi_index();
    build_gauss_jacobi(a, a, num_nodes, RuleKind::GaussUltraspherical, Some(dims))
}

fn build_gauss_jacobi(
    alpha: f64,
    beta: f64,
    num_nodes: usize,
    kind: RuleKind,
    dims: Option<DimensionParams>,
) -> Result<QuadratureRule> {
    if num_nodes == 0 {
        return Err(Error::InvalidParameter("a Gauss rule needs at least one node".into()));
    }
    if !(alpha > -1.0 && beta > -1.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::Domain(format!(
            "Gauss–Jacobi weight needs alpha, beta > -1 (got {alpha}, {beta})"
        )));
    }
    let n = num_nodes;
    let rec = Orthonormal::new(alpha, beta, 2 * n + 1);
    let mut nodes = tridiagonal_eigenvalues(rec.a[..n].to_vec(), &rec.sqrt_b[..n])?;
    nodes.sort_by(f64::total_cmp);

    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..NEWTON_STEPS {
            let (p, dp, _) = rec.eval_with_derivative(n, *x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            let candidate = (*x - step).clamp(-1.0, 1.0);
            let converged = step.abs() <= 2.0 * f64::EPSILON * x.abs().max(1e-300);
            *x = candidate;
            if converged {
                break;
            }
        }
        let (_, _, sum_sq) = rec.eval_with_derivative(n, *x);
        weights.push(1.0 / sum_sq);
    }

    if alpha == beta {
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (nodes[j] - nodes[i]);
            let w = 0.5 * (weights[i] + weights[j]);
            nodes[i] = -x;
            nodes[j] = x;
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
    }

    if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes[0] <= -1.0 || nodes[n - 1] >= 1.0 {
        return Err(Error::Convergence {
            what: format!("Gauss–Jacobi nodes for ({alpha}, {beta}, N={n})"),
            iterations: NEWTON_STEPS,
        });
    }

    audit_orthonormal_moments(&rec, &nodes, &weights, kind)?;
    QuadratureRule::from_parts(kind, dims, 1, nodes, weights, 2 * n - 1)
}

/// Checks `Σ w_i p_k(x_i) = √μ₀ δ_{k0}` for every `k ≤ 2N−1`.
fn audit_orthonormal_moments(
    rec: &Orthonormal,
    nodes: &[f64],
    weights: &[f64],
    kind: RuleKind,
) -> Result<()> {
    let n = nodes.len();
    let top = 2 * n;
    let mut moments = vec![NeumaierSum::new(); top];
    let mut scale = vec![NeumaierSum::new(); top];
    for (&x, &w) in nodes.iter().zip(weights) {
        let mut p_prev = 0.0;
        let mut p = rec.p0;
        for k in 0..top {
            moments[k].add(w * p);
            scale[k].add(w * p.abs());
            if k + 1 < top {
                let sb = if k == 0 { 0.0 } else { rec.sqrt_b[k] };
                let next = ((x - rec.a[k]) * p - sb * p_prev) / rec.sqrt_b[k + 1];
                p_prev = p;
                p = next;
            }
        }
    }
    let root_mu0 = rec.mu0.sqrt();
    let total = compensated_sum(weights.iter().copied());
    let mass_error = ((total - rec.mu0) / rec.mu0).abs();
    if mass_error > AUDIT_TOLERANCE {
        return Err(Error::MomentAudit {
            rule: kind.tag(),
            degree: 0,
            error: mass_error,
            tolerance: AUDIT_TOLERANCE,
        });
    }
    for k in 0..top {
        let exact = if k == 0 { root_mu0 } else { 0.0 };
        let reference = root_mu0.max(scale[k].value());
        let error = (moments[k].value() - exact).abs() / reference;
        if !(error <= AUDIT_TOLERANCE) {
            return Err(Error::MomentAudit {
                rule: kind.tag(),
                degree: k,
                error,
                tolerance: AUDIT_TOLERANCE,
            });
        }
    }
    Ok(())
}

/// `M` equally spaced angles `2πj/M` with weight `2π/M`; exact for trigonometric
/// polynomials of degree `≤ M−1`.
pub fn periodic_uniform(num_points: usize) -> Result<QuadratureRule> {
    if num_points == 0 {
        return Err(Error::InvalidParameter("periodic rule needs at least one point".into()));
    }
    let h = 2.0 * PI / num_points as f64;
    let nodes = (0..num_points).map(|j| h * j as f64).collect();
    let weights = vec![h; num_points];
    QuadratureRule::from_parts(RuleKind::PeriodicUniform, None, 1, nodes, weights, num_points - 1)
}
