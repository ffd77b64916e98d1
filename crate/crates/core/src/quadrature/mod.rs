//! Gauss–Jacobi rules on `[−1, 1]`, uniform rules on the circle, and product rules on
//! `S^{d−1}`.
//!
//! Every rule audits its own moments when it is built and refuses to exist if the audit
//! fails, so a constructed [`QuadratureRule`] always carries a trustworthy exactness degree.

mod cache;
mod gauss;
mod sphere;
mod sum;

pub use cache::RuleCache;
pub use gauss::{gauss_jacobi, gauss_ultraspherical, periodic_uniform, AUDIT_TOLERANCE};
pub use sphere::{
    sphere_monomial_integral, sphere_product_rule, sphere_product_rule_with_cap,
    sphere_rule_size, DEFAULT_NODE_CAP, MAX_SPHERE_DIMENSION,
};
pub use sum::{compensated_sum, NeumaierSum};

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special_fn::DimensionParams;

/// Nodes per parallel work item. Fixed, so the summation order never depends on the
/// number of threads.
const CHUNK: usize = 4096;

/// What a rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// `∫ f(t) (1−t)^α (1+t)^β dt`.
    GaussJacobi { alpha: f64, beta: f64 },
    /// `∫ f(t) (1−t²)^{(d−3)/2} dt`.
    GaussUltraspherical,
    /// `∫_0^{2π} f(φ) dφ`.
    PeriodicUniform,
    /// `∫_{S^{d−1}} f dσ`.
    SphereProduct,
}

impl RuleKind {
    /// Short tag used in cache keys and reports.
    pub fn tag(&self) -> String {
        match self {
            RuleKind::GaussJacobi { alpha, beta } => format!("gauss-jacobi({alpha},{beta})"),
            RuleKind::GaussUltraspherical => "gauss-ultraspherical".into(),
            RuleKind::PeriodicUniform => "periodic-uniform".into(),
            RuleKind::SphereProduct => "sphere-product".into(),
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Nodes and positive weights, with the polynomial degree up to which the rule is exact.
///
/// Nodes are stored flat: `point_dim` coordinates per node (1 for interval and circle
/// rules, `d` for sphere rules).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    kind: RuleKind,
    dims: Option<DimensionParams>,
    point_dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exactness_degree: usize,
}

impl QuadratureRule {
    pub(crate) fn from_parts(
        kind: RuleKind,
        dims: Option<DimensionParams>,
        point_dim: usize,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        exactness_degree: usize,
    ) -> Result<Self> {
        if point_dim == 0 || nodes.len() != weights.len() * point_dim || weights.is_empty() {
            return Err(Error::InvalidParameter(
                "node and weight arrays do not match".into(),
            ));
        }
        if let Some(i) = weights.iter().position(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "weight {i} = {} is not positive",
                weights[i]
            )));
        }
        Ok(Self {
            kind,
            dims,
            point_dim,
            nodes,
            weights,
            exactness_degree,
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn dims(&self) -> Option<DimensionParams> {
        self.dims
    }

    /// Coordinates per node.
    pub fn point_dim(&self) -> usize {
        self.point_dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All node coordinates, `point_dim` per node.
    pub fn nodes_flat(&self) -> &[f64] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.point_dim..(i + 1) * self.point_dim]
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.nodes.chunks_exact(self.point_dim)
    }

    /// Abscissae of a one-dimensional rule.
    pub fn abscissae(&self) -> &[f64] {
        debug_assert_eq!(self.point_dim, 1);
        &self.nodes
    }

    /// `Σ w_i`.
    pub fn total_weight(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    /// `Σ w_i f(x_i)`.
    ///
    /// Work is split into fixed-size chunks summed with compensation, so the result is
    /// bit-for-bit independent of the thread count.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.integrate_weighted(|i, x| Ok(self.weights[i] * checked(i, x, f(x))?))
    }

    /// `Σ_i term(i, x_i)`, with the same deterministic chunking as [`integrate`](Self::integrate).
    pub fn integrate_weighted<F>(&self, term: F) -> Result<f64>
    where
        F: Fn(usize, &[f64]) -> Result<f64> + Sync,
    {
        let n = self.len();
        let chunks: Vec<Result<NeumaierSum>> = (0..n.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut acc = NeumaierSum::new();
                for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                    acc.add(term(i, self.node(i))?);
                }
                Ok(acc)
            })
            .collect();
        let mut total = NeumaierSum::new();
        for chunk in chunks {
            let c = chunk?;
            total.add(c.value());
        }
        Ok(total.value())
    }

    /// One-dimensional convenience wrapper around [`integrate`](Self::integrate).
    pub fn integrate_1d<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        self.integrate(|x| f(x[0]))
    }
}

#[inline]
fn checked(index: usize, point: &[f64], value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            index,
            point: point.to_vec(),
            value,
        })
    }
}
