use std::f64::consts::{LN_2, PI};
use std::fmt;

use super::basis::{evaluate, level_index};
use super::function::SphereFunction;
use super::spec::{Family, HarmonicSpec};
use crate::error::{Error, Result};
use crate::quadrature::{
    gauss_jacobi, sphere_product_rule_with_cap, NeumaierSum, QuadratureRule, DEFAULT_NODE_CAP,
};
use crate::special_fn::{
    jacobi_l2_norm_squared, jacobi_leading_coefficient, ln_beta, ln_gamma, sphere_area,
    JacobiRecurrence,
};
use crate::sup::{sup_abs_on_grid, uniform_grid, SupEstimate};

/// Gauss nodes per panel between consecutive zeros in the 1-D `|P|^p` integrals.
const PANEL_NODES: usize = 24;

/// How a norm was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    ClosedForm,
    Factorized1d,
    ProductQuadrature,
    SupSampling,
}

impl fmt::Display for NormMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormMethod::ClosedForm => "closed-form",
            NormMethod::Factorized1d => "factorized-1d",
            NormMethod::ProductQuadrature => "product-quadrature",
            NormMethod::SupSampling => "sup-sampling",
        })
    }
}

#[derive(Debug, Clone)]
pub struct NormResult {
    pub spec: HarmonicSpec,
    pub p: f64,
    pub value: f64,
    pub method: NormMethod,
    /// Estimated relative slack of a sampled supremum (`p = ∞` only).
    pub slack: Option<f64>,
}

/// Limits for the product-quadrature route.
#[derive(Debug, Clone, Copy)]
pub struct NormBudget {
    pub max_sphere_nodes: u128,
    /// Exactness degree of the product rule; defaults to `n·p` for even integer `p`.
    pub quadrature_degree: Option<usize>,
}

impl Default for NormBudget {
    fn default() -> Self {
        Self {
            max_sphere_nodes: DEFAULT_NODE_CAP,
            quadrature_degree: None,
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("L^p exponent must be positive, got {p}")))
    }
}

/// `‖Y‖_p` with respect to the unnormalized surface measure, `0 < p ≤ ∞`.
///
/// Routes: `p = ∞` by sampling the one-dimensional profiles; the power family by its Beta
/// closed form; zonal and basis elements by factorized one-dimensional integrals.
pub fn lp_norm(spec: &HarmonicSpec, p: f64, _budget: &NormBudget) -> Result<NormResult> {
    check_exponent(p)?;
    if p.is_infinite() {
        let est = sup_norm(spec)?;
        return Ok(NormResult {
            spec: spec.clone(),
            p,
            value: est.value,
            method: NormMethod::SupSampling,
            slack: Some(est.slack),
        });
    }
    let (value, method) = match spec.family() {
        Family::Power { .. } => (closed_form_norm(spec, p)?, NormMethod::ClosedForm),
        _ => (factorized_norm(spec, p)?, NormMethod::Factorized1d),
    };
    finite_norm(spec, p, value, method)
}

fn finite_norm(spec: &HarmonicSpec, p: f64, value: f64, method: NormMethod) -> Result<NormResult> {
    if !value.is_finite() {
        return Err(Error::Overflow(format!("‖{spec}‖_{p} is not finite")));
    }
    Ok(NormResult {
        spec: spec.clone(),
        p,
        value,
        method,
        slack: None,
    })
}

/// Closed forms: the power family for every `p`, and every family at `p = 2`.
///
/// `‖(x₁+ix₂)^n‖_p^p = π |S^{d−3}| B(np/2 + 1, (d−2)/2)`, with `|S^0| = 2`.
pub fn closed_form_norm(spec: &HarmonicSpec, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let dims = spec.dims();
    let d = dims.d();
    match spec.family() {
        Family::Power { n } => {
            if p.is_infinite() {
                return Ok(1.0);
            }
            let ln_pp = PI.ln()
                + sphere_area(d - 2).ln()
                + ln_beta(*n as f64 * p / 2.0 + 1.0, (d as f64 - 2.0) / 2.0);
            Ok((ln_pp / p).exp())
        }
        Family::Zonal { n, .. } if p == 2.0 => {
            let a = dims.jacobi_index();
            Ok((dims.equator_area() * jacobi_l2_norm_squared(*n, a, a)?).sqrt())
        }
        Family::Basis { m, .. } if p == 2.0 => {
            let mut sq = 2.0 * PI;
            for k in 1..=d - 2 {
                let alpha = level_index(d, k, m[k]);
                sq *= jacobi_l2_norm_squared(m[k - 1] - m[k], alpha, alpha)?;
            }
            Ok(sq.sqrt())
        }
        _ => Err(Error::InvalidParameter(format!(
            "no closed form for ‖{spec}‖_{p}"
        ))),
    }
}

/// Factorized route: `‖Y‖_p^p` as a product of one-dimensional integrals.
///
/// Zonal: `|S^{d−2}| ∫|P_n^{(a,a)}|^p (1−t²)^a dt`. Basis (and the power family, which is
/// the basis element with tuple `(n, …, n)`): `2π Π_k ∫|P_{j_k}^{(α_k,α_k)}|^p (1−t²)^{e_k} dt`
/// with `e_k = p m_k/2 + (d−2−k)/2`.
pub fn factorized_norm(spec: &HarmonicSpec, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Err(Error::InvalidParameter("use sup_norm for p = ∞".into()));
    }
    let dims = spec.dims();
    let d = dims.d();
    let ln_pp = match spec.family() {
        Family::Zonal { n, .. } => {
            let a = dims.jacobi_index();
            dims.equator_area().ln() + ln_abs_power_integral(a, *n, p, a)?
        }
        Family::Power { n } => ln_factorized(d, &vec![*n; d - 1], p)?,
        Family::Basis { m, .. } => ln_factorized(d, m, p)?,
    };
    Ok((ln_pp / p).exp())
}

fn ln_factorized(d: usize, m: &[usize], p: f64) -> Result<f64> {
    let mut total = (2.0 * PI).ln();
    for k in 1..=d - 2 {
        let alpha = level_index(d, k, m[k]);
        let e = p * m[k] as f64 / 2.0 + (d - 2 - k) as f64 / 2.0;
        total += ln_abs_power_integral(alpha, m[k - 1] - m[k], p, e)?;
    }
    Ok(total)
}

/// `ln ∫_{−1}^{1} |P_j^{(α,α)}(t)|^p (1−t²)^e dt` for `p > 0`, `e > −1`.
///
/// The interval is split at the zeros of `P_j`. On each panel the non-smooth factors
/// `|t − r|^p` at the panel ends (and `(1∓t)^e` on the outer panels) are absorbed into a
/// Gauss–Jacobi weight, and the remaining smooth factor
/// `k_j^p Π |t − r_i|^p` is evaluated in the log domain.
pub fn ln_abs_power_integral(alpha: f64, j: usize, p: f64, e: f64) -> Result<f64> {
    if !(e > -1.0) {
        return Err(Error::Domain(format!("weight exponent must exceed -1, got {e}")));
    }
    if j == 0 {
        // ∫(1−t²)^e dt = 2^{2e+1} B(e+1, e+1)
        return Ok((2.0 * e + 1.0) * LN_2 + 2.0 * ln_gamma(e + 1.0) - ln_gamma(2.0 * e + 2.0));
    }
    let roots_rule = gauss_jacobi(alpha, alpha, j)?;
    let roots = roots_rule.abscissae();
    let ln_lead = jacobi_leading_coefficient(j, alpha, alpha);
    let interior = gauss_jacobi(p, p, PANEL_NODES)?;
    let left = gauss_jacobi(p, e, PANEL_NODES)?;
    let right = gauss_jacobi(e, p, PANEL_NODES)?;

    let mut logs: Vec<f64> = Vec::with_capacity((j + 1) * PANEL_NODES);
    // `skip` holds the root indices already absorbed into the panel weight.
    let mut panel = |rule: &QuadratureRule, lo: f64, hi: f64, skip: (usize, usize), ends: Ends| {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let ln_h = h.ln();
        let power = match ends {
            Ends::Interior => 2.0 * p + 1.0,
            Ends::Left | Ends::Right => p + e + 1.0,
        };
        for (&s, &w) in rule.abscissae().iter().zip(rule.weights()) {
            let t = c + h * s;
            let mut ln_smooth = 0.0;
            for (i, &r) in roots.iter().enumerate() {
                if i != skip.0 && i != skip.1 {
                    ln_smooth += (t - r).abs().ln();
                }
            }
            let ln_weight = match ends {
                Ends::Interior => e * ((1.0 - t) * (1.0 + t)).ln(),
                Ends::Left => e * (1.0 - t).ln(),
                Ends::Right => e * (1.0 + t).ln(),
            };
            logs.push(w.ln() + power * ln_h + p * (ln_lead + ln_smooth) + ln_weight);
        }
    };
    panel(&left, -1.0, roots[0], (0, usize::MAX), Ends::Left);
    for i in 0..j - 1 {
        panel(&interior, roots[i], roots[i + 1], (i, i + 1), Ends::Interior);
    }
    panel(&right, roots[j - 1], 1.0, (j - 1, usize::MAX), Ends::Right);

    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = NeumaierSum::new();
    for l in &logs {
        acc.add((l - max).exp());
    }
    let total = max + acc.value().ln();
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFinite {
            index: 0,
            point: vec![alpha, j as f64, p, e],
            value: total,
        })
    }
}

#[derive(Clone, Copy)]
enum Ends {
    Left,
    Interior,
    Right,
}

/// `‖Y‖_p` by a product rule on the sphere applied to `|Y|^p`.
///
/// Exact when `p` is an even integer and the rule degree is at least `n·p`; for other `p`
/// the integrand has kinks on the zero set of `Y` and the rule converges algebraically.
pub fn product_quadrature_norm(spec: &HarmonicSpec, p: f64, budget: &NormBudget) -> Result<f64> {
    check_exponent(p)?;
    let degree = budget
        .quadrature_degree
        .unwrap_or_else(|| default_product_degree(spec.degree(), p));
    let rule = sphere_product_rule_with_cap(spec.dims(), degree, budget.max_sphere_nodes)?;
    let pp = rule.integrate(|x| {
        evaluate(spec, x)
            .map(|z| z.norm().powf(p))
            .unwrap_or(f64::NAN)
    })?;
    Ok(pp.powf(1.0 / p))
}

fn default_product_degree(n: usize, p: f64) -> usize {
    if p.fract() == 0.0 && (p as usize) % 2 == 0 {
        n * p as usize
    } else {
        n * p.ceil() as usize + 64
    }
}

/// `(∫|f|^p dσ)^{1/p}` for an arbitrary sphere function, by a product rule of the given
/// degree.
pub fn lp_norm_of_function<F: SphereFunction + ?Sized>(
    f: &F,
    p: f64,
    degree: usize,
    node_cap: u128,
) -> Result<f64> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(sup_norm_of_function(f, degree.max(8), node_cap)?.value);
    }
    let rule = sphere_product_rule_with_cap(f.dims(), degree, node_cap)?;
    let pp = rule.integrate(|x| f.eval(x).abs().powf(p))?;
    Ok(pp.powf(1.0 / p))
}

/// `sup |Y|` from the one-dimensional profiles of a single harmonic.
///
/// `|Y|` factorizes over the polar angles, so the supremum is the product of the suprema
/// of `|sin^{m_k}θ P_j^{(α_k,α_k)}(cos θ)|`, each found by dense sampling in θ and
/// golden-section refinement of the largest peaks.
pub fn sup_norm(spec: &HarmonicSpec) -> Result<SupEstimate> {
    let dims = spec.dims();
    let d = dims.d();
    match spec.family() {
        Family::Zonal { n, .. } => {
            let a = dims.jacobi_index();
            profile_sup(a, *n, 0)
        }
        Family::Power { n } => profile_sup(0.0, 0, *n),
        Family::Basis { m, .. } => {
            let mut value = 1.0;
            let mut slack = 0.0;
            let mut argmax = 0.0;
            for k in 1..=d - 2 {
                let est = profile_sup(level_index(d, k, m[k]), m[k - 1] - m[k], m[k])?;
                value *= est.value;
                slack += est.slack;
                if k == 1 {
                    argmax = est.argmax;
                }
            }
            Ok(SupEstimate {
                value,
                argmax,
                slack,
            })
        }
    }
}

/// `sup_θ |sin^m θ · P_j^{(α,α)}(cos θ)|`; `argmax` is the angle θ.
fn profile_sup(alpha: f64, j: usize, m: usize) -> Result<SupEstimate> {
    let rec = JacobiRecurrence::new(alpha, alpha, j)?;
    let points = (16 * (j + m) + 1).max(2049);
    let grid = uniform_grid(0.0, PI, points);
    sup_abs_on_grid(
        |theta| theta.sin().powi(m as i32) * rec.eval(j, theta.cos()),
        &grid,
    )
}

/// `sup |f|` for an arbitrary sphere function: the largest value over the nodes of a
/// product rule of the given degree, then a coordinate-wise golden-section search in the
/// hyperspherical angles around the best few nodes.
///
/// The result is a lower bound; `slack` is the relative gain achieved by refinement, which
/// estimates how far the sampled value was from a local maximum.
pub fn sup_norm_of_function<F: SphereFunction + ?Sized>(
    f: &F,
    degree: usize,
    node_cap: u128,
) -> Result<SupEstimate> {
    let rule = sphere_product_rule_with_cap(f.dims(), degree, node_cap)?;
    let d = f.dims().d();
    let mut values: Vec<(f64, usize)> = rule
        .nodes()
        .enumerate()
        .map(|(i, x)| (f.eval(x).abs(), i))
        .collect();
    if let Some(&(v, i)) = values.iter().find(|(v, _)| !v.is_finite()) {
        return Err(Error::NonFinite {
            index: i,
            point: rule.node(i).to_vec(),
            value: v,
        });
    }
    values.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let sampled = values[0].0;
    let step = PI / (degree.max(1) as f64);
    let mut best = SupEstimate {
        value: sampled,
        argmax: 0.0,
        slack: 0.0,
    };
    for &(_, i) in values.iter().take(4) {
        let mut angles = to_angles(rule.node(i));
        let mut current = f.eval(&from_angles(&angles, d)).abs();
        for _sweep in 0..3 {
            for a in 0..angles.len() {
                let centre = angles[a];
                let est = crate::sup::golden_max(
                    |v| {
                        let mut trial = angles.clone();
                        trial[a] = v;
                        f.eval(&from_angles(&trial, d)).abs()
                    },
                    centre - step,
                    centre + step,
                )?;
                if est.value > current {
                    current = est.value;
                    angles[a] = est.argmax;
                }
            }
        }
        if current > best.value {
            best.value = current;
        }
    }
    best.slack = if best.value > 0.0 {
        (best.value - sampled) / best.value
    } else {
        0.0
    };
    Ok(best)
}

/// Hyperspherical angles `(θ₁, …, θ_{d−2}, φ)` of a point.
fn to_angles(x: &[f64]) -> Vec<f64> {
    let a = super::basis::Angles::from_point(x);
    let mut out: Vec<f64> = a
        .cos
        .iter()
        .zip(&a.sin)
        .map(|(c, s)| s.atan2(*c))
        .collect();
    out.push(a.azimuth.im.atan2(a.azimuth.re));
    out
}

fn from_angles(angles: &[f64], d: usize) -> Vec<f64> {
    let mut x = vec![0.0; d];
    let mut sine = 1.0;
    for k in 0..d - 2 {
        x[d - 1 - k] = sine * angles[k].cos();
        sine *= angles[k].sin();
    }
    x[0] = sine * angles[d - 2].cos();
    x[1] = sine * angles[d - 2].sin();
    x
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::DimensionParams;
    use approx::assert_relative_eq;

    fn dims(d: usize) -> DimensionParams {
        DimensionParams::new(d).unwrap()
    }

    #[test]
    fn documented_values() {
        let b = NormBudget::default();
        let power = HarmonicSpec::power(dims(3), 1);
        assert_relative_eq!(lp_norm(&power, 2.0, &b).unwrap().value, (8.0 * PI / 3.0).sqrt(), max_relative = 1e-13);
        let zonal = HarmonicSpec::zonal(dims(3), 1);
        assert_relative_eq!(lp_norm(&zonal, 2.0, &b).unwrap().value, (4.0 * PI / 3.0).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn abs_power_integral_matches_brute_force() {
        // |P_3(t)| against a fine Gauss–Legendre sum split at the zeros by hand.
        let exact_l1 = ln_abs_power_integral(0.0, 3, 1.0, 0.0).unwrap().exp();
        // ∫|P_3| = 2∫_0^1 |(5t³−3t)/2| dt with the zero at √(3/5).
        let z = (0.6f64).sqrt();
        let prim = |t: f64| (5.0 * t.powi(4) / 4.0 - 1.5 * t * t) / 2.0;
        let expected = 2.0 * ((prim(z) - prim(0.0)).abs() + (prim(1.0) - prim(z)).abs());
        assert_relative_eq!(exact_l1, expected, max_relative = 1e-13);
    }

    #[test]
    fn even_power_integrals_match_l2_norms() {
        for &(alpha, j) in &[(0.0, 5usize), (0.5, 7), (1.0, 12), (3.5, 4)] {
            let via_panels = ln_abs_power_integral(alpha, j, 2.0, alpha).unwrap().exp();
            let closed = jacobi_l2_norm_squared(j, alpha, alpha).unwrap();
            assert_relative_eq!(via_panels, closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn power_routes_agree() {
        for d in 3..=5 {
            for &p in &[0.5, 1.0, 2.0, 3.7] {
                let spec = HarmonicSpec::power(dims(d), 9);
                let a = closed_form_norm(&spec, p).unwrap();
                let b = factorized_norm(&spec, p).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn zonal_sup_is_endpoint_value() {
        for d in 3..=6 {
            let a = dims(d).jacobi_index();
            for n in [0usize, 1, 7, 40] {
                let spec = HarmonicSpec::zonal(dims(d), n);
                let est = sup_norm(&spec).unwrap();
                let endpoint = crate::special_fn::jacobi_at_one(n, a).unwrap();
                assert_relative_eq!(est.value, endpoint, max_relative = 1e-13);
                assert!(est.slack <= 1e-6);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_exponent() {
        let spec = HarmonicSpec::zonal(dims(3), 2);
        assert!(lp_norm(&spec, 0.0, &NormBudget::default()).is_err());
        assert!(lp_norm(&spec, -1.0, &NormBudget::default()).is_err());
    }

    #[test]
    fn angle_roundtrip() {
        let x = [0.1, -0.7, 0.2, (1.0f64 - 0.01 - 0.49 - 0.04).sqrt()];
        let y = from_angles(&to_angles(&x), 4);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
