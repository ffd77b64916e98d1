//! Exact exponent algebra for `sup_{Y ∈ H_n^d} ‖Y‖_q/‖Y‖_p`.
//!
//! Indices are kept as exact reciprocals (`1/∞ = 0`), so every regime boundary is decided
//! without rounding. Floats appear only in the Pitt constant.

mod index;
mod pitt;
mod rates;
mod regimes;
mod restriction;
mod table;

pub use index::{LpIndex, Rational};
pub use pitt::{pitt_constant, PittConstant, PittRatio};
pub use rates::{
    family_ratio_slope, family_slope, sogge_case_exponent, sogge_p_lambda,
    sogge_projection_rate, sogge_q_rate, zonal_critical_index, FamilySlope, ProjectionRate,
    ProjectionSide, SoggeCase,
};
pub use regimes::{
    admissible_regimes, boundary_points, classify, in_open_rectangle, nikolskii_rate,
    regime_grid, Regime, RegimeResult, WitnessFamily,
};
pub use restriction::{
    restriction_exponent, restriction_q_edge, restriction_sweep, RestrictionSweep,
    RestrictionVerdict,
};
pub use table::{default_indices, RateTable, RateRow};

/// `x` as a float.
pub fn rational_to_f64(x: Rational) -> f64 {
    index::to_f64(x)
}
