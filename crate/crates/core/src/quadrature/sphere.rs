use rayon::prelude::*;

use super::gauss::{gauss_jacobi, periodic_uniform, AUDIT_TOLERANCE};
use super::{NeumaierSum, QuadratureRule, RuleKind};
use crate::error::{Error, Result};
use crate::special_fn::{ln_gamma, DimensionParams};

/// Default cap on the number of sphere nodes.
pub const DEFAULT_NODE_CAP: u128 = 20_000_000;

/// Product rules are offered up to `S^5 ⊂ R^6`.
pub const MAX_SPHERE_DIMENSION: usize = 6;

/// Highest total degree of the mixed monomials checked by the sphere audit.
const AUDIT_MIXED_DEGREE: usize = 4;

/// Pure even powers up to this degree are all checked; above it a geometric subset.
const AUDIT_DENSE_DEGREE: usize = 32;

/// `(polar nodes per level, azimuthal points, total nodes)` of the product rule of the
/// given exactness on `S^{d−1}`.
pub fn sphere_rule_size(d: usize, max_degree: usize) -> (usize, usize, u128) {
    let polar = max_degree / 2 + 1;
    let azimuth = max_degree + 1;
    let total = (polar as u128).pow((d - 2) as u32) * azimuth as u128;
    (polar, azimuth, total)
}

/// Product rule on `S^{d−1}` exact for spherical polynomials of total degree `≤ max_degree`,
/// with the default node cap.
pub fn sphere_product_rule(dims: DimensionParams, max_degree: usize) -> Result<QuadratureRule> {
    sphere_product_rule_with_cap(dims, max_degree, DEFAULT_NODE_CAP)
}

/// Product rule in hyperspherical coordinates
/// `x_d = cos θ₁, x_{d−1} = sin θ₁ cos θ₂, …, x₁ = Π sin θ_k cos φ, x₂ = Π sin θ_k sin φ`.
///
/// Polar level `k` carries the weight `(1−t²)^{(d−2−k)/2}` and gets a Gauss–Jacobi rule with
/// `⌊D/2⌋+1` nodes; the azimuth gets `D+1` uniform points.
pub fn sphere_product_rule_with_cap(
    dims: DimensionParams,
    max_degree: usize,
    node_cap: u128,
) -> Result<QuadratureRule> {
    let d = dims.d();
    if d > MAX_SPHERE_DIMENSION {
        return Err(Error::DimensionTooLarge {
            d,
            max: MAX_SPHERE_DIMENSION,
        });
    }
    let (polar, azimuth, total) = sphere_rule_size(d, max_degree);
    if total > node_cap {
        return Err(Error::Budget {
            what: format!("sphere product rule of degree {max_degree} on S^{}", d - 1),
            requested: total,
            cap: node_cap,
        });
    }
    let levels: Vec<QuadratureRule> = (1..=d - 2)
        .map(|k| {
            let alpha = (d - 2 - k) as f64 / 2.0;
            gauss_jacobi(alpha, alpha, polar)
        })
        .collect::<Result<_>>()?;
    let circle = periodic_uniform(azimuth)?;
    let (cos_phi, sin_phi): (Vec<f64>, Vec<f64>) =
        circle.abscissae().iter().map(|&phi| (phi.cos(), phi.sin())).unzip();
    let az_weight = circle.weights()[0];

    let total = total as usize;
    let mut nodes = Vec::with_capacity(total * d);
    let mut weights = Vec::with_capacity(total);
    let mut index = vec![0usize; d - 2];
    let mut point = vec![0.0; d];
    loop {
        let mut sine = 1.0;
        let mut weight = az_weight;
        for (k, level) in levels.iter().enumerate() {
            let t = level.abscissae()[index[k]];
            weight *= level.weights()[index[k]];
            point[d - 1 - k] = sine * t;
            sine *= (1.0 - t * t).sqrt();
        }
        for j in 0..azimuth {
            point[0] = sine * cos_phi[j];
            point[1] = sine * sin_phi[j];
            nodes.extend_from_slice(&point);
            weights.push(weight);
        }
        // Advance the polar multi-index, last level fastest.
        let mut level = d - 2;
        loop {
            if level == 0 {
                let rule = QuadratureRule::from_parts(
                    RuleKind::SphereProduct,
                    Some(dims),
                    d,
                    nodes,
                    weights,
                    max_degree,
                )?;
                audit_sphere_rule(&rule, dims, max_degree)?;
                return Ok(rule);
            }
            level -= 1;
            index[level] += 1;
            if index[level] < polar {
                break;
            }
            index[level] = 0;
        }
    }
}

/// `∫_{S^{d−1}} x^α dσ = 2 Π Γ((α_i+1)/2) / Γ((|α|+d)/2)` when every `α_i` is even, else 0.
pub fn sphere_monomial_integral(exponents: &[usize]) -> f64 {
    if exponents.iter().any(|e| e % 2 == 1) {
        return 0.0;
    }
    let d = exponents.len() as f64;
    let total: usize = exponents.iter().sum();
    let log = exponents
        .iter()
        .map(|&e| ln_gamma((e as f64 + 1.0) / 2.0))
        .sum::<f64>()
        - ln_gamma((total as f64 + d) / 2.0);
    2.0 * log.exp()
}

/// All exponent vectors of length `d` with total degree `≤ max_total`.
fn monomials(d: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; d];
    fn rec(pos: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            current[pos] = e;
            rec(pos + 1, left - e, current, out);
        }
        current[pos] = 0;
    }
    rec(0, max_total, &mut current, &mut out);
    out
}

/// Unit-norm nodes, total mass `|S^{d−1}|`, and exact monomial integrals: every monomial of
/// degree `≤ min(D, 4)` and pure even powers `x_i^{2j}` up to `D`.
fn audit_sphere_rule(rule: &QuadratureRule, dims: DimensionParams, max_degree: usize) -> Result<()> {
    let d = dims.d();
    for (i, x) in rule.nodes().enumerate() {
        let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-14 {
            return Err(Error::MomentAudit {
                rule: format!("sphere-product node {i} off the sphere"),
                degree: 0,
                error: (norm - 1.0).abs(),
                tolerance: 1e-14,
            });
        }
    }

    let mut tests = monomials(d, max_degree.min(AUDIT_MIXED_DEGREE));
    for i in 0..d {
        for e in pure_power_degrees(max_degree) {
            let mut alpha = vec![0; d];
            alpha[i] = e;
            tests.push(alpha);
        }
    }

    let sums = integrate_monomials(rule, &tests);
    for (alpha, value) in tests.iter().zip(sums) {
        // Vanishing moments are measured against the total mass.
        let exact = sphere_monomial_integral(alpha);
        let reference = if exact == 0.0 { dims.sphere_area() } else { exact };
        let error = (value - exact).abs() / reference;
        if !(error <= AUDIT_TOLERANCE) {
            return Err(Error::MomentAudit {
                rule: format!("sphere-product monomial {alpha:?}"),
                degree: alpha.iter().sum(),
                error,
                tolerance: AUDIT_TOLERANCE,
            });
        }
    }
    let area_error = ((rule.total_weight() - dims.sphere_area()) / dims.sphere_area()).abs();
    if area_error > 1e-12 {
        return Err(Error::MomentAudit {
            rule: "sphere-product total mass".into(),
            degree: 0,
            error: area_error,
            tolerance: 1e-12,
        });
    }
    Ok(())
}

/// Even degrees above the mixed block: all of them up to `AUDIT_DENSE_DEGREE`, then a
/// geometric ladder that always ends at the largest even degree `≤ D`. The 1-D factors
/// carry their own full moment audits.
fn pure_power_degrees(max_degree: usize) -> Vec<usize> {
    let top = max_degree - max_degree % 2;
    let mut out: Vec<usize> = (AUDIT_MIXED_DEGREE + 2..=top.min(AUDIT_DENSE_DEGREE)).step_by(2).collect();
    let mut e = AUDIT_DENSE_DEGREE;
    while e < top {
        e = (e + e / 4).min(top);
        e -= e % 2;
        out.push(e);
    }
    out
}

/// `Σ w x^α` for each exponent vector, in fixed-size parallel chunks.
fn integrate_monomials(rule: &QuadratureRule, tests: &[Vec<usize>]) -> Vec<f64> {
    const CHUNK: usize = 4096;
    let d = rule.point_dim();
    let table = tests.iter().flatten().copied().max().unwrap_or(0).min(AUDIT_DENSE_DEGREE) + 1;
    let n = rule.len();
    let partials: Vec<Vec<NeumaierSum>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![NeumaierSum::new(); tests.len()];
            let mut powers = vec![1.0; d * table];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let x = rule.node(i);
                let w = rule.weights()[i];
                for (j, &xj) in x.iter().enumerate() {
                    let row = &mut powers[j * table..(j + 1) * table];
                    for e in 1..table {
                        row[e] = row[e - 1] * xj;
                    }
                }
                for (t, alpha) in tests.iter().enumerate() {
                    let v: f64 = alpha
                        .iter()
                        .enumerate()
                        .map(|(j, &e)| {
                            if e < table {
                                powers[j * table + e]
                            } else {
                                x[j].powi(e as i32)
                            }
                        })
                        .product();
                    acc[t].add(w * v);
                }
            }
            acc
        })
        .collect();
    let mut totals = vec![NeumaierSum::new(); tests.len()];
    for part in partials {
        for (t, a) in part.into_iter().enumerate() {
            totals[t].add(a.value());
        }
    }
    totals.into_iter().map(|a| a.value()).collect()
}
