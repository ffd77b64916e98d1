use crate::error::{Error, Result};
use crate::special_fn::ln_gamma;

/// Source of the factor `sup_{Y ∈ H_k^d} ‖Y‖_{p′}/‖Y‖_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PittRatio {
    /// A measured value.
    Empirical(f64),
    /// `k^{(d−2)(1/p−1/2)}` with unit constant; correct in order only.
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PittConstant {
    pub value: f64,
    /// Log of the Gamma-factor part, everything except the harmonic ratio.
    pub ln_gamma_part: f64,
    pub ratio: f64,
    pub order_only: bool,
}

/// Best constant of the Pitt inequality for `f Y_k`, `Y_k ∈ H_k^d`, `1 ≤ p ≤ 2`:
/// `(2π)^{d/2} 2^{1/2−1/p′} p^{(Ap+2)/(4p)} Γ((Ap′+2)/4)^{1/p′} / ((p′)^{(Ap′+2)/(4p′)} Γ((Ap+2)/4)^{1/p})`
/// with `A = 2k+d−1`, times the harmonic ratio.
pub fn pitt_constant(d: usize, k: usize, p: f64, ratio: PittRatio) -> Result<PittConstant> {
    if d < 3 {
        return Err(Error::Domain(format!("dimension d={d} must be at least 3")));
    }
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain(format!("Pitt constant needs 1 ≤ p ≤ 2, got {p}")));
    }
    let a = (2 * k + d - 1) as f64;
    let recip_conj = 1.0 - 1.0 / p;
    // (1/p′)·ln Γ((Ap′+2)/4) − ((Ap′+2)/(4p′))·ln p′, which tends to (A/4)(ln(A/4) − 1) as p → 1.
    let conj_part = if recip_conj == 0.0 {
        0.25 * a * ((0.25 * a).ln() - 1.0)
    } else {
        let pc = p / (p - 1.0);
        let x = (a * pc + 2.0) / 4.0;
        recip_conj * ln_gamma(x) - (x / pc) * pc.ln()
    };
    let y = (a * p + 2.0) / 4.0;
    let ln_gamma_part = 0.5 * d as f64 * (2.0 * std::f64::consts::PI).ln()
        + (0.5 - recip_conj) * std::f64::consts::LN_2
        + (y / p) * p.ln()
        + conj_part
        - ln_gamma(y) / p;
    let (ratio, order_only) = match ratio {
        PittRatio::Empirical(v) => {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("harmonic ratio must be positive, got {v}")));
            }
            (v, false)
        }
        PittRatio::Asymptotic => {
            let e = (d as f64 - 2.0) * (1.0 / p - 0.5);
            ((k.max(1) as f64).powf(e), true)
        }
    };
    let value = ln_gamma_part.exp() * ratio;
    if !value.is_finite() {
        return Err(Error::Overflow(format!("Pitt constant for d={d}, k={k}, p={p}")));
    }
    Ok(PittConstant {
        value,
        ln_gamma_part,
        ratio,
        order_only,
    })
}
