use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::basis::{real_basis, RealBasisElement};
use super::function::HarmonicCombination;
use super::norm::closed_form_norm;
use super::spec::HarmonicSpec;
use crate::error::Result;
use crate::special_fn::DimensionParams;

/// `‖B‖_2` of a real basis element: the complex norm, halved in square when the element
/// is the real or imaginary part of a nonconstant azimuthal factor.
pub fn real_basis_l2_norm(dims: DimensionParams, element: &RealBasisElement) -> Result<f64> {
    let spec = HarmonicSpec::basis(dims, element.m.clone(), 1)?;
    let complex = closed_form_norm(&spec, 2.0)?;
    Ok(if element.m[dims.d() - 2] > 0 {
        complex / std::f64::consts::SQRT_2
    } else {
        complex
    })
}

/// A reproducible random element of `H_n^d`: independent standard normal coefficients on
/// the `L²`-normalized real basis, drawn from a ChaCha stream seeded with `seed`.
pub fn random_harmonic(dims: DimensionParams, n: usize, seed: u64) -> Result<HarmonicCombination> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = real_basis(dims.d(), n)
        .iter()
        .map(|el| {
            let z: f64 = StandardNormal.sample(&mut rng);
            Ok(z / real_basis_l2_norm(dims, el)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    HarmonicCombination::new(dims, n, coefficients)
}
