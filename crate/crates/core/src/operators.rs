//! The projections `proj_k` and the convolution operators `T_n`, applied by sphere
//! quadrature, plus a one-dimensional route for convolving zonal functions.
//!
//! `proj_k f(x) = C_{k,d} ∫ f(y) P_k^{(a,a)}(x·y) dσ(y)` and `T_n f(x) = ∫ f(y) Φ_n(x·y) dσ(y)`.
//! Inputs carry a polynomial degree bound, and an operator only accepts inputs its rule
//! integrates exactly against the kernel.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

pub use crate::harmonics::SphereFunction;

use crate::error::{Error, Result};
use crate::quadrature::{
    gauss_jacobi, gauss_ultraspherical, sphere_product_rule_with_cap, NeumaierSum,
    QuadratureRule, DEFAULT_NODE_CAP,
};
use crate::special_fn::{
    binomial, c_n_constant, jacobi_at_one, jacobi_l2_norm_squared, DimensionParams, KernelKind,
    ZonalKernel,
};
use crate::sup::{sup_abs_on_grid, uniform_grid, SupEstimate};

/// Which operator a [`ZonalOperator`] implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Projection { k: usize },
    TOperator { n: usize },
    Custom,
}

/// Convolution with a zonal kernel, discretized by a sphere rule.
#[derive(Debug, Clone)]
pub struct ZonalOperator {
    dims: DimensionParams,
    kind: OperatorKind,
    kernel: ZonalKernel,
    rule: Arc<QuadratureRule>,
    input_degree: usize,
}

impl ZonalOperator {
    /// `proj_k` for inputs of degree `≤ input_degree`, with its own product rule.
    pub fn projection(dims: DimensionParams, k: usize, input_degree: usize) -> Result<Self> {
        let kernel = ZonalKernel::projection(dims, k)?;
        let rule = sphere_product_rule_with_cap(dims, input_degree + k, DEFAULT_NODE_CAP)?;
        Self::with_rule(OperatorKind::Projection { k }, kernel, Arc::new(rule), input_degree)
    }

    /// `T_n` for inputs of degree `≤ input_degree`, with its own product rule.
    pub fn t_operator(dims: DimensionParams, n: usize, input_degree: usize) -> Result<Self> {
        let kernel = ZonalKernel::phi(dims, n)?;
        let degree = input_degree + kernel.max_degree();
        let rule = sphere_product_rule_with_cap(dims, degree, DEFAULT_NODE_CAP)?;
        Self::with_rule(OperatorKind::TOperator { n }, kernel, Arc::new(rule), input_degree)
    }

    /// Operator on a shared rule; fails unless the rule integrates
    /// `degree(input) + degree(kernel)` exactly.
    pub fn with_rule(
        kind: OperatorKind,
        kernel: ZonalKernel,
        rule: Arc<QuadratureRule>,
        input_degree: usize,
    ) -> Result<Self> {
        let dims = kernel.dims();
        if rule.dims().map(|r| r.d()) != Some(dims.d()) || rule.point_dim() != dims.d() {
            return Err(Error::InvalidParameter(
                "operator needs a sphere rule of the kernel's dimension".into(),
            ));
        }
        let required = input_degree + kernel.max_degree();
        if rule.exactness_degree() < required {
            return Err(Error::ExactnessInsufficient {
                required,
                available: rule.exactness_degree(),
            });
        }
        Ok(Self {
            dims,
            kind,
            kernel,
            rule,
            input_degree,
        })
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn kernel(&self) -> &ZonalKernel {
        &self.kernel
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        &self.rule
    }

    pub fn input_degree(&self) -> usize {
        self.input_degree
    }

    /// Samples `w_i f(y_i)` on the rule; the returned function evaluates lazily.
    pub fn apply<F: SphereFunction + ?Sized>(&self, f: &F) -> Result<AppliedOperator> {
        if f.dims().d() != self.dims.d() {
            return Err(Error::InvalidParameter(format!(
                "input lives on S^{} but the operator on S^{}",
                f.dims().d() - 1,
                self.dims.d() - 1
            )));
        }
        if f.degree_bound() > self.input_degree {
            return Err(Error::ExactnessInsufficient {
                required: f.degree_bound() + self.kernel.max_degree(),
                available: self.rule.exactness_degree(),
            });
        }
        let weighted: Vec<f64> = (0..self.rule.len())
            .into_par_iter()
            .map(|i| self.rule.weights()[i] * f.eval(self.rule.node(i)))
            .collect();
        if let Some(i) = weighted.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                index: i,
                point: self.rule.node(i).to_vec(),
                value: weighted[i],
            });
        }
        let output_degree = match self.kind {
            OperatorKind::Projection { k } => k,
            _ => self.kernel.max_degree().min(f.degree_bound() + self.kernel.max_degree()),
        };
        Ok(AppliedOperator {
            dims: self.dims,
            degree: output_degree,
            kernel: self.kernel.clone(),
            rule: Arc::clone(&self.rule),
            weighted,
        })
    }
}

/// `x ↦ Σ_i w_i f(y_i) K(x·y_i)`, evaluated on demand.
#[derive(Debug, Clone)]
pub struct AppliedOperator {
    dims: DimensionParams,
    degree: usize,
    kernel: ZonalKernel,
    rule: Arc<QuadratureRule>,
    weighted: Vec<f64>,
}

impl AppliedOperator {
    /// Values at many points, in parallel over the points.
    pub fn eval_many(&self, points: &[Vec<f64>]) -> Vec<f64> {
        points.par_iter().map(|x| self.eval(x)).collect()
    }
}

impl SphereFunction for AppliedOperator {
    fn dims(&self) -> DimensionParams {
        self.dims
    }

    fn degree_bound(&self) -> usize {
        self.degree
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = NeumaierSum::new();
        for (y, &wf) in self.rule.nodes().zip(&self.weighted) {
            if wf != 0.0 {
                let t: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                acc.add(wf * self.kernel.eval_unchecked(t.clamp(-1.0, 1.0)));
            }
        }
        acc.value()
    }
}

/// `proj_k f`.
pub fn project<F: SphereFunction + ?Sized>(
    dims: DimensionParams,
    k: usize,
    f: &F,
) -> Result<AppliedOperator> {
    ZonalOperator::projection(dims, k, f.degree_bound())?.apply(f)
}

/// `T_n f`.
pub fn t_operator<F: SphereFunction + ?Sized>(
    dims: DimensionParams,
    n: usize,
    f: &F,
) -> Result<AppliedOperator> {
    ZonalOperator::t_operator(dims, n, f.degree_bound())?.apply(f)
}

/// `Σ_j coefficient_j · g_j` for applied operators `g_j`.
#[derive(Debug, Clone)]
pub struct OperatorSum {
    dims: DimensionParams,
    terms: Vec<(f64, AppliedOperator)>,
}

impl SphereFunction for OperatorSum {
    fn dims(&self) -> DimensionParams {
        self.dims
    }

    fn degree_bound(&self) -> usize {
        self.terms.iter().map(|(_, t)| t.degree).max().unwrap_or(0)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, t)| c * t.eval(x)).sum()
    }
}

impl OperatorSum {
    pub fn eval_many(&self, points: &[Vec<f64>]) -> Vec<f64> {
        points.par_iter().map(|x| self.eval(x)).collect()
    }
}

/// `Σ_{j=0}^{d−2} (−1)^j C(d−2,j) (c_n/c_{n+2j}) proj_{n+2j} f`, built from projections
/// sharing one sphere rule.
pub fn t_operator_expansion<F: SphereFunction + ?Sized>(
    dims: DimensionParams,
    n: usize,
    f: &F,
) -> Result<OperatorSum> {
    let ell = dims.d() - 2;
    let top = n + 2 * ell;
    let rule = Arc::new(sphere_product_rule_with_cap(
        dims,
        f.degree_bound() + top,
        DEFAULT_NODE_CAP,
    )?);
    let c_n = c_n_constant(dims, n)?;
    let mut terms = Vec::with_capacity(ell + 1);
    for j in 0..=ell {
        let k = n + 2 * j;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * binomial(ell, j) * c_n / c_n_constant(dims, k)?;
        let op = ZonalOperator::with_rule(
            OperatorKind::Projection { k },
            ZonalKernel::projection(dims, k)?,
            Arc::clone(&rule),
            f.degree_bound(),
        )?;
        terms.push((coeff, op.apply(f)?));
    }
    Ok(OperatorSum { dims, terms })
}

/// `Σ_j c_j (a_j·x)^{k_j}` with unit directions `a_j`.
#[derive(Debug, Clone)]
pub struct RidgePolynomial {
    dims: DimensionParams,
    terms: Vec<(f64, Vec<f64>, usize)>,
}

impl RidgePolynomial {
    pub fn new(dims: DimensionParams, terms: Vec<(f64, Vec<f64>, usize)>) -> Result<Self> {
        for (_, a, _) in &terms {
            if a.len() != dims.d() {
                return Err(Error::InvalidParameter(format!(
                    "ridge direction has {} coordinates, expected {}",
                    a.len(),
                    dims.d()
                )));
            }
        }
        Ok(Self { dims, terms })
    }

    /// `num_terms` ridge monomials with Gaussian coefficients, uniform random directions and
    /// degrees drawn from `0..=max_degree`. The first two terms have degrees `max_degree` and
    /// `max_degree − 1`, so every harmonic degree up to `max_degree` is present.
    pub fn random(dims: DimensionParams, max_degree: usize, num_terms: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..num_terms)
            .map(|i| {
                let c: f64 = StandardNormal.sample(&mut rng);
                let a = random_unit_vector(dims.d(), &mut rng);
                let u: f64 = rand::Rng::random(&mut rng);
                let k = if i == 0 {
                    max_degree
                } else if i == 1 {
                    max_degree.saturating_sub(1)
                } else {
                    ((u * (max_degree + 1) as f64) as usize).min(max_degree)
                };
                (c, a, k)
            })
            .collect();
        Self { dims, terms }
    }
}

impl SphereFunction for RidgePolynomial {
    fn dims(&self) -> DimensionParams {
        self.dims
    }

    fn degree_bound(&self) -> usize {
        self.terms.iter().map(|t| t.2).max().unwrap_or(0)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, a, k)| {
                let t: f64 = a.iter().zip(x).map(|(u, v)| u * v).sum();
                c * t.powi(*k as i32)
            })
            .sum()
    }
}

fn random_unit_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut *rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `count` reproducible points spread over `S^{d−1}`.
pub fn test_points(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_unit_vector(d, &mut rng)).collect()
}

/// Zonal convolution by Funk–Hecke.
///
/// For `K` and `h` polynomials in `t` of the given degrees, `∫ K(x·y) h(y·e) dσ(y)` is the
/// zonal function `s ↦ Σ_k a_k μ_k P_k(s)` of `s = x·e`, where `h = Σ a_k P_k` and
/// `μ_k = |S^{d−2}| ∫ K(t) R_k(t) (1−t²)^a dt`. Both expansions are computed with a Gauss
/// rule that is exact for them.
pub fn zonal_convolve<K, H>(
    dims: DimensionParams,
    kernel: K,
    kernel_degree: usize,
    profile: H,
    profile_degree: usize,
) -> Result<ZonalKernel>
where
    K: Fn(f64) -> f64 + Sync,
    H: Fn(f64) -> f64 + Sync,
{
    let a = dims.jacobi_index();
    let top = profile_degree.min(kernel_degree);
    let nodes = (kernel_degree.max(profile_degree) + top) / 2 + 1;
    let rule = gauss_ultraspherical(dims, nodes)?;
    let recurrence = crate::special_fn::JacobiRecurrence::new(a, a, top)?;
    let t = rule.abscissae();
    let w = rule.weights();
    let kvals: Vec<f64> = t.iter().map(|&x| kernel(x)).collect();
    let hvals: Vec<f64> = t.iter().map(|&x| profile(x)).collect();
    if let Some(i) = kvals.iter().chain(&hvals).position(|v| !v.is_finite()) {
        let i = i % t.len();
        return Err(Error::NonFinite {
            index: i,
            point: vec![t[i]],
            value: f64::NAN,
        });
    }
    let mut ak = vec![NeumaierSum::new(); top + 1];
    let mut mk = vec![NeumaierSum::new(); top + 1];
    let mut pk = vec![0.0; top + 1];
    for i in 0..t.len() {
        recurrence.eval_into(t[i], &mut pk);
        for k in 0..=top {
            ak[k].add(w[i] * hvals[i] * pk[k]);
            mk[k].add(w[i] * kvals[i] * pk[k]);
        }
    }
    let weights = (0..=top)
        .map(|k| {
            let a_k = ak[k].value() / jacobi_l2_norm_squared(k, a, a)?;
            let mu_k = dims.equator_area() * mk[k].value() / jacobi_at_one(k, a)?;
            Ok(a_k * mu_k)
        })
        .collect::<Result<Vec<f64>>>()?;
    ZonalKernel::from_weights(dims, KernelKind::Custom, top, weights)
}

/// `sup_θ |h(cos θ)|` for a zonal profile given as a Jacobi expansion.
pub fn zonal_sup(profile: &ZonalKernel) -> Result<SupEstimate> {
    let points = (16 * (profile.max_degree() + 1) + 1).max(2049);
    let grid = uniform_grid(0.0, std::f64::consts::PI, points);
    sup_abs_on_grid(|theta| profile.eval_unchecked(theta.cos()), &grid)
}

/// `‖h(x·e)‖_{L¹(S^{d−1})} = |S^{d−2}| ∫ |h(t)| (1−t²)^a dt` for a polynomial profile.
///
/// The sign changes of `h` are located by sampling and bisection; between them `|h|` is a
/// polynomial and each panel is integrated with a Gauss rule that absorbs the endpoint
/// factors `(1∓t)^a` on the outer panels.
pub fn zonal_l1_norm(profile: &ZonalKernel) -> Result<f64> {
    let dims = profile.dims();
    let a = dims.jacobi_index();
    let deg = profile.max_degree();
    let h = |t: f64| profile.eval_unchecked(t);
    let roots = sign_changes(&h, deg);
    let m = deg / 2 + 16;
    let mut acc = NeumaierSum::new();
    let mut panel = |rule: &QuadratureRule, lo: f64, hi: f64, left_singular: bool, right_singular: bool| {
        let c = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let power = 1.0
            + if left_singular { a } else { 0.0 }
            + if right_singular { a } else { 0.0 };
        let scale = half.powf(power);
        for (&s, &w) in rule.abscissae().iter().zip(rule.weights()) {
            let t = c + half * s;
            let mut v = h(t).abs();
            if !left_singular {
                v *= (1.0 + t).powf(a);
            }
            if !right_singular {
                v *= (1.0 - t).powf(a);
            }
            acc.add(scale * w * v);
        }
    };
    let mut cuts = vec![-1.0];
    cuts.extend(roots);
    cuts.push(1.0);
    let last = cuts.len() - 2;
    for (i, win) in cuts.windows(2).enumerate() {
        let left = i == 0;
        let right = i == last;
        let rule = gauss_jacobi(if right { a } else { 0.0 }, if left { a } else { 0.0 }, m)?;
        panel(&rule, win[0], win[1], left, right);
    }
    Ok(dims.equator_area() * acc.value())
}

/// Zeros of a polynomial of degree `deg` on `(−1, 1)`, found as sign changes on a θ-grid
/// fine enough to separate them, refined by bisection.
fn sign_changes<H: Fn(f64) -> f64>(h: &H, deg: usize) -> Vec<f64> {
    let grid: Vec<f64> = uniform_grid(std::f64::consts::PI, 0.0, 64 * (deg + 1) + 1)
        .into_iter()
        .map(f64::cos)
        .collect();
    let mut roots = Vec::new();
    for win in grid.windows(2) {
        let (mut lo, mut hi) = (win[0], win[1]);
        let (flo, fhi) = (h(lo), h(hi));
        if flo == 0.0 && lo > -1.0 {
            roots.push(lo);
            continue;
        }
        if flo * fhi < 0.0 {
            let mut f_lo = flo;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = h(mid);
                if (fm < 0.0) == (f_lo < 0.0) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots.dedup();
    roots
}
