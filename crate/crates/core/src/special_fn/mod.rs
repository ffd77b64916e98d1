//! Jacobi polynomials, Gamma-based constants and the zonal kernels built from them.
//!
//! Everything here is a pure function of its arguments. Constants involving
//! `Γ(d+n−1)` are assembled in the log domain and exponentiated last, so they stay
//! finite far beyond the point where the Gamma function itself overflows (`n ≈ 170`).

mod jacobi;
mod kernels;

pub use jacobi::{
    jacobi_at_one, jacobi_eval, jacobi_l2_norm_squared, jacobi_leading_coefficient,
    normalized_jacobi, JacobiParams, JacobiRecurrence,
};
pub use kernels::{
    c_n_constant, delta2_diff, difference_bound_constant, kernel_bound_constant, phi_kernel,
    proj_constant, KernelKind, KernelProfile, ZonalKernel,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Points `t` this far outside `[-1, 1]` are clamped instead of rejected.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Ambient dimension `d` of the sphere `S^{d-1} ⊂ R^d` and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionParams {
    d: usize,
    lambda: f64,
    sphere_area: f64,
}

impl DimensionParams {
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::InvalidParameter(format!(
                "sphere dimension requires d >= 3, got d={d}"
            )));
        }
        Ok(Self {
            d,
            lambda: (d as f64 - 2.0) / 2.0,
            sphere_area: sphere_area(d),
        })
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// `λ = (d−2)/2`.
    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `|S^{d−1}| = 2π^{d/2}/Γ(d/2)`.
    #[inline]
    pub fn sphere_area(&self) -> f64 {
        self.sphere_area
    }

    /// Jacobi index `λ − 1/2 = (d−3)/2` of the zonal harmonics and of the sphere weight
    /// `(1−t²)^{(d−3)/2}`.
    #[inline]
    pub fn jacobi_index(&self) -> f64 {
        (self.d as f64 - 3.0) / 2.0
    }

    /// `|S^{d−2}|`, the factor in `∫_{S^{d−1}} h(x·e) dσ = |S^{d−2}| ∫ h(t)(1−t²)^{(d−3)/2} dt`.
    #[inline]
    pub fn equator_area(&self) -> f64 {
        sphere_area(self.d - 1)
    }
}

/// Surface measure of the unit sphere in `R^k`, i.e. `|S^{k−1}|`.
///
/// Uses `|S^{k−1}| = 2π/(k−2) · |S^{k−3}|` from `|S^0| = 2` and `|S^1| = 2π`, which keeps
/// `4π` and `2π²` within a couple of ulps.
pub fn sphere_area(k: usize) -> f64 {
    assert!(k >= 1, "sphere_area needs an ambient dimension >= 1");
    let mut area = if k % 2 == 1 { 2.0 } else { 2.0 * PI };
    let mut j = if k % 2 == 1 { 1 } else { 2 };
    while j < k {
        area *= 2.0 * PI / j as f64;
        j += 2;
    }
    area
}

/// `ln Γ(x)` for `x > 0`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma called with non-positive argument {x}");
    libm::lgamma_r(x).0
}

/// `ln B(a, b)`.
#[inline]
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Binomial coefficient `C(n, k)` for small arguments, as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exponentiates a log-domain constant, failing instead of returning `inf`.
pub(crate) fn checked_exp(log_value: f64, what: &str) -> Result<f64> {
    let v = log_value.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!(
            "{what} = exp({log_value:.3}) exceeds the floating range"
        )))
    }
}

/// Validates an abscissa `t ∈ [−1, 1]`, clamping round-off excursions.
pub(crate) fn check_abscissa(t: f64) -> Result<f64> {
    if t.is_nan() || t.abs() > 1.0 + DOMAIN_SLACK {
        return Err(Error::Domain(format!("abscissa t={t} outside [-1, 1]")));
    }
    Ok(t.clamp(-1.0, 1.0))
}
