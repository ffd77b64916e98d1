use super::{check_abscissa, checked_exp, ln_gamma, DimensionParams};
use crate::error::{Error, Result};

/// Degree and indices of a Jacobi polynomial `P_n^{(α,β)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiParams {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        validate_indices(alpha, beta)?;
        Ok(Self { n, alpha, beta })
    }
}

fn validate_indices(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0 && alpha.is_finite() && beta > -1.0 && beta.is_finite()) {
        return Err(Error::Domain(format!(
            "Jacobi indices must satisfy alpha, beta > -1 (got alpha={alpha}, beta={beta})"
        )));
    }
    Ok(())
}

/// Coefficients of `P_{k+1} = (a_k t + b_k) P_k − c_k P_{k−1}` for `k ≥ 1`.
#[inline]
fn step_coefficients(k: usize, alpha: f64, beta: f64) -> [f64; 3] {
    let k = k as f64;
    let s = 2.0 * k + alpha + beta;
    let denom = 2.0 * (k + 1.0) * (k + alpha + beta + 1.0) * s;
    [
        (s + 1.0) * (s + 2.0) * s / denom,
        (s + 1.0) * (alpha * alpha - beta * beta) / denom,
        2.0 * (k + alpha) * (k + beta) * (s + 2.0) / denom,
    ]
}

#[inline]
fn first_degree(t: f64, alpha: f64, beta: f64) -> f64 {
    0.5 * ((alpha + beta + 2.0) * t + (alpha - beta))
}

/// `P_n^{(α,β)}(t)` by forward three-term recurrence in the degree.
pub fn jacobi_eval(params: JacobiParams, t: f64) -> Result<f64> {
    validate_indices(params.alpha, params.beta)?;
    let t = check_abscissa(t)?;
    let JacobiParams { n, alpha, beta } = params;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = first_degree(t, alpha, beta);
    for k in 1..n {
        let [a, b, c] = step_coefficients(k, alpha, beta);
        let next = (a * t + b) * cur - c * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Precomputed recurrence coefficients for repeated evaluation of `P_k^{(α,β)}` up to a
/// fixed maximal degree.
#[derive(Debug, Clone)]
pub struct JacobiRecurrence {
    alpha: f64,
    beta: f64,
    coeffs: Vec<[f64; 3]>,
}

impl JacobiRecurrence {
    pub fn new(alpha: f64, beta: f64, max_degree: usize) -> Result<Self> {
        validate_indices(alpha, beta)?;
        let coeffs = (0..max_degree.max(1))
            .map(|k| {
                if k == 0 {
                    [0.0; 3]
                } else {
                    step_coefficients(k, alpha, beta)
                }
            })
            .collect();
        Ok(Self {
            alpha,
            beta,
            coeffs,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `P_n(t)`; `t` is not range checked.
    #[inline]
    pub fn eval(&self, n: usize, t: f64) -> f64 {
        debug_assert!(n <= self.max_degree());
        if n == 0 {
            return 1.0;
        }
        let mut prev = 1.0;
        let mut cur = first_degree(t, self.alpha, self.beta);
        for &[a, b, c] in &self.coeffs[1..n] {
            let next = (a * t + b) * cur - c * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Fills `out[k] = P_k(t)` for `k < out.len()`.
    #[inline]
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        debug_assert!(out.len() <= self.max_degree() + 1);
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        if out.len() == 1 {
            return;
        }
        out[1] = first_degree(t, self.alpha, self.beta);
        for k in 1..out.len() - 1 {
            let [a, b, c] = self.coeffs[k];
            out[k + 1] = (a * t + b) * out[k] - c * out[k - 1];
        }
    }

    /// `Σ_k weights[k] P_k(t)`, running the recurrence once.
    #[inline]
    pub fn dot(&self, weights: &[f64], t: f64) -> f64 {
        debug_assert!(weights.len() <= self.max_degree() + 1);
        match weights.len() {
            0 => return 0.0,
            1 => return weights[0],
            _ => {}
        }
        let mut prev = 1.0;
        let mut cur = first_degree(t, self.alpha, self.beta);
        let mut acc = weights[0] + weights[1] * cur;
        for (k, &w) in weights.iter().enumerate().skip(2) {
            let [a, b, c] = self.coeffs[k - 1];
            let next = (a * t + b) * cur - c * prev;
            prev = cur;
            cur = next;
            acc += w * cur;
        }
        acc
    }
}

/// `ln P_n^{(α,β)}(1) = ln C(n+α, n)`.
pub(crate) fn ln_jacobi_at_one(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    ln_gamma(nf + alpha + 1.0) - ln_gamma(alpha + 1.0) - ln_gamma(nf + 1.0)
}

/// `P_n^{(α,β)}(1) = Γ(n+α+1)/(Γ(α+1)Γ(n+1))`, evaluated in the log domain.
pub fn jacobi_at_one(n: usize, alpha: f64) -> Result<f64> {
    validate_indices(alpha, alpha)?;
    checked_exp(ln_jacobi_at_one(n, alpha), "P_n(1)")
}

/// Leading coefficient `Γ(2n+α+β+1)/(2^n n! Γ(n+α+β+1))` of `P_n^{(α,β)}`, as a logarithm.
pub fn jacobi_leading_coefficient(n: usize, alpha: f64, beta: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    ln_gamma(2.0 * nf + alpha + beta + 1.0)
        - nf * std::f64::consts::LN_2
        - ln_gamma(nf + 1.0)
        - ln_gamma(nf + alpha + beta + 1.0)
}

/// `∫_{−1}^{1} P_n^{(α,β)}(t)² (1−t)^α (1+t)^β dt`.
pub fn jacobi_l2_norm_squared(n: usize, alpha: f64, beta: f64) -> Result<f64> {
    validate_indices(alpha, beta)?;
    let ab = alpha + beta;
    let log = if n == 0 {
        (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
            - ln_gamma(ab + 2.0)
    } else {
        let nf = n as f64;
        (ab + 1.0) * std::f64::consts::LN_2 - (2.0 * nf + ab + 1.0).ln()
            + ln_gamma(nf + alpha + 1.0)
            + ln_gamma(nf + beta + 1.0)
            - ln_gamma(nf + ab + 1.0)
            - ln_gamma(nf + 1.0)
    };
    checked_exp(log, "Jacobi norm")
}

/// `R_n^λ(t) = P_n^{(λ−1/2,λ−1/2)}(t) / P_n^{(λ−1/2,λ−1/2)}(1)`.
///
/// The endpoint value comes from log-Gamma so the ratio never divides two huge numbers.
pub fn normalized_jacobi(dims: DimensionParams, n: usize, t: f64) -> Result<f64> {
    let a = dims.jacobi_index();
    let p = jacobi_eval(JacobiParams::new(n, a, a)?, t)?;
    Ok(p * (-ln_jacobi_at_one(n, a)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(n: usize, a: f64, b: f64, t: f64) -> f64 {
        jacobi_eval(JacobiParams::new(n, a, b).unwrap(), t).unwrap()
    }

    #[test]
    fn degree_zero_is_one() {
        assert_eq!(p(0, 0.5, 0.5, 0.3), 1.0);
    }

    #[test]
    fn legendre_closed_form() {
        // (3t²−1)/2 at t = 1/2
        assert_relative_eq!(p(2, 0.0, 0.0, 0.5), -0.125, epsilon = 1e-15);
        for &t in &[-0.9, -0.2, 0.0, 0.37, 1.0] {
            let p3 = (5.0 * t * t * t - 3.0 * t) / 2.0;
            assert_relative_eq!(p(3, 0.0, 0.0, t), p3, epsilon = 1e-14);
        }
    }

    #[test]
    fn first_degree_formula() {
        let (a, b, t): (f64, f64, f64) = (0.3, -0.4, 0.7);
        assert_relative_eq!(p(1, a, b, t), ((a + b + 2.0) * t + (a - b)) / 2.0);
    }

    #[test]
    fn endpoint_identity_small_degree() {
        // P_5^{(1/2,1/2)}(1) = Γ(6.5)/(Γ(1.5)·5!)
        let expected = libm::tgamma(6.5) / (libm::tgamma(1.5) * 120.0);
        assert_relative_eq!(p(5, 0.5, 0.5, 1.0), expected, max_relative = 1e-14);
        assert_relative_eq!(jacobi_at_one(5, 0.5).unwrap(), expected, max_relative = 1e-13);
    }

    #[test]
    fn endpoint_identity_up_to_512() {
        for d in 3..=5 {
            let a = (d as f64 - 3.0) / 2.0;
            for n in (0..=512).step_by(7) {
                let rec = p(n, a, a, 1.0);
                let closed = jacobi_at_one(n, a).unwrap();
                assert!(
                    ((rec - closed) / closed).abs() <= 1e-10,
                    "d={d} n={n}: {rec} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn gegenbauer_chebyshev_u_special_case() {
        // d=4: α=β=1/2, P_n^{(1/2,1/2)} ∝ U_n, so R_2(0) = U_2(0)/U_2(1) = −1/3.
        let dims = DimensionParams::new(4).unwrap();
        assert_relative_eq!(normalized_jacobi(dims, 2, 0.0).unwrap(), -1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn normalized_endpoint_and_parity() {
        let d3 = DimensionParams::new(3).unwrap();
        assert_relative_eq!(normalized_jacobi(d3, 7, 1.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(normalized_jacobi(d3, 4, -1.0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn parity_and_boundedness_grid() {
        for d in 3..=5 {
            let dims = DimensionParams::new(d).unwrap();
            for n in [0usize, 1, 2, 5, 16, 63, 128, 255, 512] {
                for j in 0..257 {
                    let t = -1.0 + 2.0 * j as f64 / 256.0;
                    let r = normalized_jacobi(dims, n, t).unwrap();
                    let r_neg = normalized_jacobi(dims, n, -t).unwrap();
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    assert!((r_neg - sign * r).abs() <= 1e-12, "parity d={d} n={n} t={t}");
                    assert!(r.abs() <= 1.0 + 1e-10, "bound d={d} n={n} t={t}: {r}");
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(jacobi_eval(JacobiParams { n: 2, alpha: 0.0, beta: 0.0 }, 1.5).is_err());
        assert!(JacobiParams::new(2, -1.0, 0.0).is_err());
        assert!(JacobiParams::new(2, 0.0, -1.5).is_err());
    }

    #[test]
    fn recurrence_table_matches_direct() {
        let rec = JacobiRecurrence::new(0.7, -0.3, 40).unwrap();
        let mut out = vec![0.0; 41];
        rec.eval_into(0.41, &mut out);
        for (n, &v) in out.iter().enumerate() {
            assert_relative_eq!(v, p(n, 0.7, -0.3, 0.41), max_relative = 1e-13, epsilon = 1e-14);
            assert_relative_eq!(rec.eval(n, 0.41), v, max_relative = 1e-14, epsilon = 1e-15);
        }
        let w: Vec<f64> = (0..=40).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let direct: f64 = w.iter().zip(&out).map(|(a, b)| a * b).sum();
        assert_relative_eq!(rec.dot(&w, 0.41), direct, max_relative = 1e-13);
    }

    #[test]
    fn leading_coefficient_legendre() {
        assert_relative_eq!(jacobi_leading_coefficient(2, 0.0, 0.0).exp(), 1.5, max_relative = 1e-14);
        assert_relative_eq!(jacobi_leading_coefficient(3, 0.0, 0.0).exp(), 2.5, max_relative = 1e-14);
    }

    #[test]
    fn legendre_norms() {
        for n in 0..10 {
            assert_relative_eq!(
                jacobi_l2_norm_squared(n, 0.0, 0.0).unwrap(),
                2.0 / (2.0 * n as f64 + 1.0),
                max_relative = 1e-14
            );
        }
    }
}
