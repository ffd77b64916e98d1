//! Norms of spherical harmonics and the growth of ‖Y_n‖_q / ‖Y_n‖_p in the degree.
//!
//! The crate is organised bottom-up:
//!
//! * [`special_fn`]: Jacobi recurrences, log-Gamma constants, step-2 difference kernels.
//! * [`quadrature`]: certified Gauss–Jacobi rules and product rules on `S^{d-1}`.
//! * [`harmonics`]: the tensor basis, the power family `(x₁+ix₂)^n`, zonal harmonics, and
//!   their `L^p` quasi-norms for `0 < p ≤ ∞`.
//! * [`operators`]: the projections `proj_k` and the convolution operators `T_n`.
//! * [`exponents`]: exact rational exponent algebra (regime table, Nikolskii, Sogge,
//!   restriction and Pitt exponents).
//! * [`experiments`]: slope fitting, verification suites and report emission behind the CLI.

pub mod error;
pub mod experiments;
pub mod exponents;
pub mod harmonics;
pub mod operators;
pub mod quadrature;
pub mod special_fn;
pub mod sup;

pub use error::{Error, Result};
pub use special_fn::DimensionParams;
