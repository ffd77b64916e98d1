use std::f64::consts::{LN_2, PI};
use std::fmt;

use super::jacobi::ln_jacobi_at_one;
use super::{binomial, check_abscissa, checked_exp, ln_gamma, DimensionParams, JacobiRecurrence};
use crate::error::{Error, Result};
use crate::sup::{sup_abs_on_grid, uniform_grid};

/// `ln c_n` with `c_n = Γ(d/2)/(2π^{d/2}) · (d+2n−2)/(d+n−2) · Γ(d+n−1)/(Γ(n+1)Γ(d−1))`.
fn ln_c_n(dims: DimensionParams, n: usize) -> f64 {
    let d = dims.d() as f64;
    let n = n as f64;
    ln_gamma(d / 2.0) - LN_2 - (d / 2.0) * PI.ln() + (d + 2.0 * n - 2.0).ln()
        - (d + n - 2.0).ln()
        + ln_gamma(d + n - 1.0)
        - ln_gamma(n + 1.0)
        - ln_gamma(d - 1.0)
}

/// The reproducing constant `c_n`: `P(x) = c_n ∫ P(y) R_n(x·y) dσ(y)` for `P ∈ H_n^d`.
pub fn c_n_constant(dims: DimensionParams, n: usize) -> Result<f64> {
    checked_exp(ln_c_n(dims, n), "c_n")
}

/// `C_{k,d}`, the constant in front of `P_k^{((d−3)/2,(d−3)/2)}(x·y)` in the projection kernel.
pub fn proj_constant(dims: DimensionParams, k: usize) -> Result<f64> {
    let d = dims.d() as f64;
    let k = k as f64;
    let log = ln_gamma(d / 2.0) + ln_gamma((d - 1.0) / 2.0)
        - LN_2
        - (d / 2.0) * PI.ln()
        - ln_gamma(d - 1.0)
        + (2.0 * k + d - 2.0).ln()
        + ln_gamma(k + d - 2.0)
        - ln_gamma(k + (d - 1.0) / 2.0);
    checked_exp(log, "C_{k,d}")
}

/// `Δ_2^ℓ R_n(t) = Σ_{j=0}^{ℓ} (−1)^j C(ℓ,j) R_{n+2j}(t)`, the step-2 difference in the degree.
pub fn delta2_diff(dims: DimensionParams, ell: usize, n: usize, t: f64) -> Result<f64> {
    ZonalKernel::delta2(dims, ell, n)?.eval(t)
}

/// `Φ_n(t) = c_n Δ_2^{d−2} R_n(t)`.
pub fn phi_kernel(dims: DimensionParams, n: usize, t: f64) -> Result<f64> {
    ZonalKernel::phi(dims, n)?.eval(t)
}

/// Which zonal kernel a [`ZonalKernel`] or [`KernelProfile`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `R_n`.
    NormalizedJacobi,
    /// `Φ_n`.
    PhiKernel,
    /// `C_{k,d} P_k^{(a,a)}`.
    ProjectionKernel,
    /// `Δ_2^ℓ R_n`.
    StepDifference { ell: usize },
    /// `g_n = P_n^{(a,a)}`, unnormalized.
    ZonalHarmonic,
    /// Arbitrary combination of Jacobi polynomials.
    Custom,
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::NormalizedJacobi => f.write_str("normalized-jacobi"),
            KernelKind::PhiKernel => f.write_str("phi-kernel"),
            KernelKind::ProjectionKernel => f.write_str("projection-kernel"),
            KernelKind::StepDifference { ell } => write!(f, "step-difference-{ell}"),
            KernelKind::ZonalHarmonic => f.write_str("zonal-harmonic"),
            KernelKind::Custom => f.write_str("custom"),
        }
    }
}

/// A zonal function `t ↦ Σ_k w_k P_k^{(a,a)}(t)` with `a = (d−3)/2`.
///
/// Every kernel used here is a short combination of Jacobi polynomials, so evaluation is a
/// single pass of the three-term recurrence with the weights accumulated on the fly.
#[derive(Debug, Clone)]
pub struct ZonalKernel {
    dims: DimensionParams,
    kind: KernelKind,
    degree: usize,
    weights: Vec<f64>,
    recurrence: JacobiRecurrence,
}

impl ZonalKernel {
    /// Kernel with the given weights on `P_0, P_1, …`; `degree` is a label (e.g. the `n`
    /// of `Φ_n`), not the polynomial degree.
    pub fn from_weights(
        dims: DimensionParams,
        kind: KernelKind,
        degree: usize,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("kernel needs at least one weight".into()));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::Overflow(format!("kernel weight {i} is not finite")));
        }
        let a = dims.jacobi_index();
        let recurrence = JacobiRecurrence::new(a, a, weights.len())?;
        Ok(Self {
            dims,
            kind,
            degree,
            weights,
            recurrence,
        })
    }

    /// Weights `Σ_j coeff_j R_{n_j}`, converted to the unnormalized basis.
    fn from_normalized_terms(
        dims: DimensionParams,
        kind: KernelKind,
        degree: usize,
        terms: &[(usize, f64)],
    ) -> Result<Self> {
        let a = dims.jacobi_index();
        let top = terms.iter().map(|&(k, _)| k).max().unwrap_or(0);
        let mut weights = vec![0.0; top + 1];
        for &(k, coeff) in terms {
            weights[k] += coeff * (-ln_jacobi_at_one(k, a)).exp();
        }
        Self::from_weights(dims, kind, degree, weights)
    }

    pub fn normalized_jacobi(dims: DimensionParams, n: usize) -> Result<Self> {
        Self::from_normalized_terms(dims, KernelKind::NormalizedJacobi, n, &[(n, 1.0)])
    }

    pub fn zonal_harmonic(dims: DimensionParams, n: usize) -> Result<Self> {
        let mut weights = vec![0.0; n + 1];
        weights[n] = 1.0;
        Self::from_weights(dims, KernelKind::ZonalHarmonic, n, weights)
    }

    pub fn projection(dims: DimensionParams, k: usize) -> Result<Self> {
        let mut weights = vec![0.0; k + 1];
        weights[k] = proj_constant(dims, k)?;
        Self::from_weights(dims, KernelKind::ProjectionKernel, k, weights)
    }

    pub fn delta2(dims: DimensionParams, ell: usize, n: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParameter("difference order must be >= 1".into()));
        }
        let terms: Vec<(usize, f64)> = (0..=ell)
            .map(|j| (n + 2 * j, sign(j) * binomial(ell, j)))
            .collect();
        Self::from_normalized_terms(dims, KernelKind::StepDifference { ell }, n, &terms)
    }

    pub fn phi(dims: DimensionParams, n: usize) -> Result<Self> {
        let ell = dims.d() - 2;
        let c = c_n_constant(dims, n)?;
        let terms: Vec<(usize, f64)> = (0..=ell)
            .map(|j| (n + 2 * j, c * sign(j) * binomial(ell, j)))
            .collect();
        Self::from_normalized_terms(dims, KernelKind::PhiKernel, n, &terms)
    }

    pub fn dims(&self) -> DimensionParams {
        self.dims
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Polynomial degree of the kernel in `t`.
    pub fn max_degree(&self) -> usize {
        self.weights.len() - 1
    }

    /// Coefficients on `P_k^{(a,a)}`, indexed by `k`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.eval_unchecked(check_abscissa(t)?))
    }

    /// Evaluation without the range check on `t`.
    #[inline]
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        self.recurrence.dot(&self.weights, t)
    }

    pub fn profile(&self, num_points: usize) -> Result<KernelProfile> {
        KernelProfile::sample(self, num_points)
    }
}

#[inline]
fn sign(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A zonal kernel sampled at increasing abscissae `t = cos θ`.
#[derive(Debug, Clone)]
pub struct KernelProfile {
    pub dims: DimensionParams,
    pub degree: usize,
    pub kind: KernelKind,
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
}

impl KernelProfile {
    /// Samples at the Chebyshev–Lobatto points `−cos(πj/(N−1))`, which cluster near `±1`
    /// where the kernels peak.
    pub fn sample(kernel: &ZonalKernel, num_points: usize) -> Result<Self> {
        let abscissae = chebyshev_lobatto(num_points)?;
        let values = abscissae.iter().map(|&t| kernel.eval_unchecked(t)).collect();
        Self::new(kernel.dims, kernel.degree, kernel.kind, abscissae, values)
    }

    pub fn new(
        dims: DimensionParams,
        degree: usize,
        kind: KernelKind,
        abscissae: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if abscissae.len() != values.len() || abscissae.is_empty() {
            return Err(Error::InvalidParameter(
                "profile needs matching, non-empty abscissae and values".into(),
            ));
        }
        if abscissae.windows(2).any(|w| !(w[0] < w[1]))
            || abscissae[0] < -1.0
            || abscissae[abscissae.len() - 1] > 1.0
        {
            return Err(Error::InvalidParameter(
                "profile abscissae must increase strictly inside [-1, 1]".into(),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                index: i,
                point: vec![abscissae[i]],
                value: values[i],
            });
        }
        Ok(Self {
            dims,
            degree,
            kind,
            abscissae,
            values,
        })
    }

    /// Largest sampled `|value|` and its abscissa.
    pub fn max_abs(&self) -> (f64, f64) {
        self.abscissae
            .iter()
            .zip(&self.values)
            .fold((self.abscissae[0], 0.0), |(bt, bv), (&t, &v)| {
                if v.abs() > bv {
                    (t, v.abs())
                } else {
                    (bt, bv)
                }
            })
    }
}

/// `N ≥ 2` Chebyshev–Lobatto points in increasing order, exactly `±1` at the ends.
pub fn chebyshev_lobatto(num_points: usize) -> Result<Vec<f64>> {
    if num_points < 2 {
        return Err(Error::InvalidParameter(
            "Chebyshev grid needs at least two points".into(),
        ));
    }
    let m = (num_points - 1) as f64;
    let mut t: Vec<f64> = (0..num_points)
        .map(|j| -(PI * j as f64 / m).cos())
        .collect();
    t[0] = -1.0;
    t[num_points - 1] = 1.0;
    // Symmetrize so the grid is exactly odd about 0.
    for j in 0..num_points / 2 {
        let v = 0.5 * (t[num_points - 1 - j] - t[j]);
        t[j] = -v;
        t[num_points - 1 - j] = v;
    }
    if num_points % 2 == 1 {
        t[num_points / 2] = 0.0;
    }
    Ok(t)
}

/// `sup_θ |Φ_n(cos θ)| / n^λ` (with `n^λ` replaced by 1 at `n = 0`).
///
/// The sup is taken over a uniform θ-grid resolving every oscillation of the kernel,
/// followed by local refinement.
pub fn kernel_bound_constant(dims: DimensionParams, n: usize) -> Result<f64> {
    let kernel = ZonalKernel::phi(dims, n)?;
    let points = (16 * (kernel.max_degree() + 1) + 1).max(2049);
    let grid = uniform_grid(0.0, PI, points);
    let est = sup_abs_on_grid(|theta| kernel.eval_unchecked(theta.cos()), &grid)?;
    Ok(est.value / (n.max(1) as f64).powf(dims.lambda()))
}

/// `max_θ |Δ_2^ℓ R_n(cos θ)| / (φ^ℓ (1+nφ)^{−λ})` with `φ = min(θ, π−θ)`.
///
/// The θ-grid combines geometric spacing near the poles (from `0.1/n`) with a uniform grid
/// of `8n+1000` points on `(0, π/2]`, mirrored onto `[π/2, π)`.
pub fn difference_bound_constant(dims: DimensionParams, ell: usize, n: usize) -> Result<f64> {
    let kernel = ZonalKernel::delta2(dims, ell, n)?;
    let lambda = dims.lambda();
    let nf = n.max(1) as f64;
    let half = difference_grid(n);
    let mut best: f64 = 0.0;
    for &phi in &half {
        let envelope = phi.powi(ell as i32) * (1.0 + nf * phi).powf(-lambda);
        for theta in [phi, PI - phi] {
            let v = kernel.eval_unchecked(theta.cos()).abs();
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: 0,
                    point: vec![theta],
                    value: v,
                });
            }
            best = best.max(v / envelope);
        }
    }
    Ok(best)
}

fn difference_grid(n: usize) -> Vec<f64> {
    let half_pi = PI / 2.0;
    let start = 0.1 / n.max(1) as f64;
    let geometric = 200;
    let ratio = (half_pi / start).ln() / (geometric - 1) as f64;
    let mut grid: Vec<f64> = (0..geometric)
        .map(|i| start * (ratio * i as f64).exp())
        .collect();
    let uniform = 8 * n + 1000;
    grid.extend((1..=uniform).map(|i| half_pi * i as f64 / uniform as f64));
    grid.retain(|&x| x > 0.0 && x <= half_pi);
    grid
}

#[cfg(test)]
mod tests {
    use super::super::normalized_jacobi;
    use super::*;
    use approx::assert_relative_eq;

    fn dims(d: usize) -> DimensionParams {
        DimensionParams::new(d).unwrap()
    }

    /// Independent oracle: each `R_{n+2j}` evaluated on its own.
    fn direct_delta2(d: usize, ell: usize, n: usize, t: f64) -> f64 {
        (0..=ell)
            .map(|j| sign(j) * binomial(ell, j) * normalized_jacobi(dims(d), n + 2 * j, t).unwrap())
            .sum()
    }

    #[test]
    fn c_n_for_the_two_sphere() {
        assert_relative_eq!(c_n_constant(dims(3), 5).unwrap(), 11.0 / (4.0 * PI), max_relative = 1e-13);
        assert_relative_eq!(c_n_constant(dims(3), 0).unwrap(), 1.0 / (4.0 * PI), max_relative = 1e-13);
        for n in 0..50 {
            let expected = (2.0 * n as f64 + 1.0) / (4.0 * PI);
            assert_relative_eq!(c_n_constant(dims(3), n).unwrap(), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn c_n_growth_band() {
        let d4 = dims(4);
        let ratios: Vec<f64> = [10usize, 20, 40, 80, 160, 320]
            .iter()
            .map(|&n| c_n_constant(d4, n).unwrap() / (n as f64).powi(2))
            .collect();
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min <= 2.0);
    }

    #[test]
    fn c_n_stays_finite_for_large_degree() {
        for d in 3..=8 {
            assert!(c_n_constant(dims(d), 100_000).unwrap().is_finite());
            assert!(proj_constant(dims(d), 100_000).unwrap().is_finite());
        }
    }

    #[test]
    fn projection_constant_two_sphere() {
        for k in [0usize, 1, 5] {
            let expected = (2.0 * k as f64 + 1.0) / (4.0 * PI);
            assert_relative_eq!(proj_constant(dims(3), k).unwrap(), expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn projection_and_reproducing_constants_agree() {
        for d in 3..=6 {
            let a = dims(d).jacobi_index();
            for k in [0usize, 1, 2, 7, 30, 200] {
                let lhs = proj_constant(dims(d), k).unwrap() * super::super::jacobi_at_one(k, a).unwrap();
                assert_relative_eq!(lhs, c_n_constant(dims(d), k).unwrap(), max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn delta2_vanishes_at_one() {
        assert!(delta2_diff(dims(3), 1, 3, 1.0).unwrap().abs() < 1e-15);
        assert!(delta2_diff(dims(3), 0, 3, 0.5).is_err());
    }

    #[test]
    fn delta2_matches_direct_sum() {
        let t = 0.9;
        let expected = direct_delta2(4, 2, 6, t);
        assert_relative_eq!(delta2_diff(dims(4), 2, 6, t).unwrap(), expected, epsilon = 1e-14);
        for d in 3..=5 {
            for ell in 1..=3 {
                for n in [0usize, 3, 17, 100] {
                    for &t in &[-0.97, -0.3, 0.0, 0.42, 0.999] {
                        let got = delta2_diff(dims(d), ell, n, t).unwrap();
                        assert!((got - direct_delta2(d, ell, n, t)).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn delta2_reflection() {
        for d in 3..=5 {
            for ell in 1..=3 {
                for n in [0usize, 1, 5, 16, 63, 128, 256] {
                    for i in 0..=64 {
                        let theta = PI / 2.0 * i as f64 / 64.0;
                        let a = delta2_diff(dims(d), ell, n, theta.cos()).unwrap();
                        let b = delta2_diff(dims(d), ell, n, (PI - theta).cos()).unwrap();
                        assert!((b - sign(n) * a).abs() <= 1e-10, "d={d} ell={ell} n={n}");
                    }
                }
            }
        }
        let theta0: f64 = 0.37;
        let at = delta2_diff(dims(3), 2, 5, theta0.cos()).unwrap();
        let mirrored = delta2_diff(dims(3), 2, 5, (PI - theta0).cos()).unwrap();
        assert_relative_eq!(mirrored, -at, epsilon = 1e-14);
    }

    #[test]
    fn phi_examples() {
        assert!(phi_kernel(dims(3), 0, 1.0).unwrap().abs() < 1e-15);
        let d4 = dims(4);
        let t = -0.4;
        let c6 = c_n_constant(d4, 6).unwrap();
        let direct = c6 * direct_delta2(4, 2, 6, t);
        assert_relative_eq!(phi_kernel(d4, 6, t).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn phi_bounded_on_grid_by_empirical_constant() {
        let d3 = dims(3);
        let k = kernel_bound_constant(d3, 8).unwrap();
        let grid = chebyshev_lobatto(2048).unwrap();
        let sup = grid
            .iter()
            .map(|&t| phi_kernel(d3, 8, t).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(sup <= k * 8f64.sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn kernel_bound_band() {
        for d in 3..=5 {
            let vals: Vec<f64> = [8usize, 16, 32, 64, 128, 256, 512]
                .iter()
                .map(|&n| kernel_bound_constant(dims(d), n).unwrap())
                .collect();
            let max = vals.iter().cloned().fold(f64::MIN, f64::max);
            let min = vals.iter().cloned().fold(f64::MAX, f64::min);
            assert!(max / min <= 4.0, "d={d}: {vals:?}");
        }
    }

    #[test]
    fn profile_invariants() {
        let k = ZonalKernel::phi(dims(4), 10).unwrap();
        let prof = k.profile(257).unwrap();
        assert_eq!(prof.abscissae.len(), 257);
        assert_eq!(prof.abscissae[0], -1.0);
        assert_eq!(prof.abscissae[256], 1.0);
        assert_eq!(prof.abscissae[128], 0.0);
        assert!(prof.abscissae.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(prof.kind.to_string(), "phi-kernel");
        let (_, m) = prof.max_abs();
        assert!(m > 0.0);
        assert!(KernelProfile::new(dims(3), 0, KernelKind::Custom, vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }
}
