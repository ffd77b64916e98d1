//! Spherical harmonics: the tensor basis in hyperspherical coordinates, the power family
//! `(x₁+ix₂)^n`, zonal harmonics `P_n^{((d−3)/2,(d−3)/2)}(x·e)`, and their `L^p` norms.
//!
//! All norms use the unnormalized surface measure `dσ`.

mod basis;
mod function;
mod norm;
mod random;
mod spec;

pub use basis::{
    basis_tuples, basis_value, dimension_of_harmonic_space, evaluate, real_basis, Angles,
    BasisEvaluator, Part, RealBasisElement,
};
pub use function::{FnSphere, HarmonicCombination, RealHarmonic, SphereFunction};
pub use norm::{
    closed_form_norm, factorized_norm, ln_abs_power_integral, lp_norm, lp_norm_of_function,
    product_quadrature_norm, sup_norm, sup_norm_of_function, NormBudget, NormMethod,
    NormResult,
};
pub use random::{random_harmonic, real_basis_l2_norm};
pub use spec::{Family, HarmonicSpec, SpherePoint, UNIT_TOLERANCE};
