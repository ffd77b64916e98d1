use super::basis::{evaluate, BasisEvaluator, Part, RealBasisElement};
use super::spec::HarmonicSpec;
use crate::special_fn::DimensionParams;

/// A real function on `S^{d−1}` that is the restriction of a polynomial of known degree.
///
/// The degree bound lets quadrature-based operators check that their rules integrate the
/// products they form exactly.
pub trait SphereFunction: Sync {
    fn dims(&self) -> DimensionParams;
    fn degree_bound(&self) -> usize;
    /// Value at a point of the sphere; points are assumed to have unit norm.
    fn eval(&self, x: &[f64]) -> f64;
}

impl<T: SphereFunction + ?Sized> SphereFunction for &T {
    fn dims(&self) -> DimensionParams {
        (**self).dims()
    }
    fn degree_bound(&self) -> usize {
        (**self).degree_bound()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (**self).eval(x)
    }
}

/// Real or imaginary part of a [`HarmonicSpec`], scaled by a constant.
#[derive(Debug, Clone)]
pub struct RealHarmonic {
    pub spec: HarmonicSpec,
    pub part: Part,
    pub scale: f64,
}

impl RealHarmonic {
    pub fn new(spec: HarmonicSpec, part: Part) -> Self {
        Self {
            spec,
            part,
            scale: 1.0,
        }
    }

    pub fn scaled(mut self, c: f64) -> Self {
        self.scale *= c;
        self
    }
}

impl SphereFunction for RealHarmonic {
    fn dims(&self) -> DimensionParams {
        self.spec.dims()
    }
    fn degree_bound(&self) -> usize {
        self.spec.degree()
    }
    fn eval(&self, x: &[f64]) -> f64 {
        let z = evaluate(&self.spec, x).unwrap_or_else(|_| num_complex::Complex64::new(f64::NAN, 0.0));
        self.scale
            * match self.part {
                Part::Re => z.re,
                Part::Im => z.im,
            }
    }
}

/// `Σ_i c_i B_i` over the real basis of `H_n^d`.
#[derive(Debug, Clone)]
pub struct HarmonicCombination {
    dims: DimensionParams,
    degree: usize,
    coefficients: Vec<f64>,
    evaluator: BasisEvaluator,
}

impl HarmonicCombination {
    /// `coefficients[i]` multiplies `real_basis(d, n)[i]`.
    pub fn new(dims: DimensionParams, degree: usize, coefficients: Vec<f64>) -> crate::Result<Self> {
        let evaluator = BasisEvaluator::new(dims, degree)?;
        if coefficients.len() != evaluator.len() {
            return Err(crate::Error::InvalidParameter(format!(
                "H_{degree} in d={} has {} basis elements, got {} coefficients",
                dims.d(),
                evaluator.len(),
                coefficients.len()
            )));
        }
        Ok(Self {
            dims,
            degree,
            coefficients,
            evaluator,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn elements(&self) -> &[RealBasisElement] {
        self.evaluator.elements()
    }

    /// The complex basis element behind each real element.
    pub fn specs(&self) -> Vec<HarmonicSpec> {
        self.elements()
            .iter()
            .map(|el| {
                HarmonicSpec::basis(self.dims, el.m.clone(), 1).expect("enumerated tuples are valid")
            })
            .collect()
    }
}

impl SphereFunction for HarmonicCombination {
    fn dims(&self) -> DimensionParams {
        self.dims
    }
    fn degree_bound(&self) -> usize {
        self.degree
    }
    fn eval(&self, x: &[f64]) -> f64 {
        let mut values = vec![0.0; self.evaluator.len()];
        self.evaluator.eval_into(x, &mut values);
        values
            .iter()
            .zip(&self.coefficients)
            .map(|(v, c)| v * c)
            .sum()
    }
}

/// A closure together with its dimension and degree bound.
pub struct FnSphere<F> {
    dims: DimensionParams,
    degree: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnSphere<F> {
    pub fn new(dims: DimensionParams, degree: usize, f: F) -> Self {
        Self { dims, degree, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> SphereFunction for FnSphere<F> {
    fn dims(&self) -> DimensionParams {
        self.dims
    }
    fn degree_bound(&self) -> usize {
        self.degree
    }
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}
