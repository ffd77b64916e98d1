use num_complex::Complex64;

use super::spec::{Family, HarmonicSpec};
use crate::error::{Error, Result};
use crate::special_fn::{DimensionParams, JacobiRecurrence};

/// `(cos θ_k, sin θ_k)` for `k = 1..d−2` and the unit azimuth `e^{iφ}` of a point.
///
/// With `r_k = (x₁² + … + x_{d−k+1}²)^{1/2}`: `cos θ_k = x_{d−k+1}/r_k`,
/// `sin θ_k = r_{k+1}/r_k`, `e^{iφ} = (x₁ + i x₂)/r_{d−1}`. A vanishing radius gives
/// `cos = 1, sin = 0` (and `φ = 0`) for every remaining angle.
#[derive(Debug, Clone)]
pub struct Angles {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    pub azimuth: Complex64,
}

impl Angles {
    pub fn from_point(x: &[f64]) -> Self {
        let d = x.len();
        let mut cos = Vec::with_capacity(d - 2);
        let mut sin = Vec::with_capacity(d - 2);
        // radii[j] = |(x_1, …, x_j)|, 1-based length.
        let mut radii = vec![0.0; d + 1];
        let mut acc = 0.0;
        for j in 1..=d {
            acc += x[j - 1] * x[j - 1];
            radii[j] = acc.sqrt();
        }
        for k in 1..=d - 2 {
            let r = radii[d - k + 1];
            if r > 0.0 {
                cos.push((x[d - k] / r).clamp(-1.0, 1.0));
                sin.push((radii[d - k] / r).clamp(0.0, 1.0));
            } else {
                cos.push(1.0);
                sin.push(0.0);
            }
        }
        let r = radii[2];
        let azimuth = if r > 0.0 {
            Complex64::new(x[0] / r, x[1] / r)
        } else {
            Complex64::new(1.0, 0.0)
        };
        Self { cos, sin, azimuth }
    }
}

/// Jacobi index `m_k + (d−2−k)/2` of the factor at polar level `k` (1-based).
#[inline]
pub(crate) fn level_index(d: usize, k: usize, m_k: usize) -> f64 {
    m_k as f64 + (d - 2 - k) as f64 / 2.0
}

/// Value of a tensor basis element
/// `e^{±i m_{d−2} φ} Π_{k=1}^{d−2} sin^{m_k} θ_k P_{m_{k−1}−m_k}^{(α_k,α_k)}(cos θ_k)`.
pub fn basis_value(d: usize, m: &[usize], sign: i8, angles: &Angles) -> Complex64 {
    let mut value = 1.0;
    for k in 1..=d - 2 {
        let alpha = level_index(d, k, m[k]);
        let j = m[k - 1] - m[k];
        let rec = JacobiRecurrence::new(alpha, alpha, j).expect("indices are nonnegative");
        value *= angles.sin[k - 1].powi(m[k] as i32) * rec.eval(j, angles.cos[k - 1]);
    }
    let az = angles.azimuth.powu(m[d - 2] as u32);
    let az = if sign < 0 { az.conj() } else { az };
    az * value
}

/// Evaluates any [`HarmonicSpec`] at a point of the sphere.
pub fn evaluate(spec: &HarmonicSpec, x: &[f64]) -> Result<Complex64> {
    let d = spec.dims().d();
    if x.len() != d {
        return Err(Error::InvalidParameter(format!(
            "point has {} coordinates, expected {d}",
            x.len()
        )));
    }
    let norm = super::spec::euclidean_norm(x);
    if !((norm - 1.0).abs() <= super::spec::UNIT_TOLERANCE) {
        return Err(Error::Domain(format!("point {x:?} is not on the unit sphere")));
    }
    Ok(match spec.family() {
        Family::Power { n } => Complex64::new(x[0], x[1]).powu(*n as u32),
        Family::Zonal { n, pole } => {
            let a = spec.dims().jacobi_index();
            let t = pole.dot(x).clamp(-1.0, 1.0);
            Complex64::new(JacobiRecurrence::new(a, a, *n)?.eval(*n, t), 0.0)
        }
        Family::Basis { m, sign } => basis_value(d, m, *sign, &Angles::from_point(x)),
    })
}

/// Real or imaginary part of a complex basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

/// One real-valued element of the basis of `H_n^d`: `Re Y_m` when `m_{d−2} = 0`, otherwise
/// `Re Y_m` (the `+` sign) or `Im Y_m` (standing in for the `−` sign).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealBasisElement {
    pub m: Vec<usize>,
    pub part: Part,
}

impl RealBasisElement {
    /// The complex basis element this one is taken from, as `(tuple, sign)`.
    pub fn complex_sign(&self) -> i8 {
        match self.part {
            Part::Re => 1,
            Part::Im => -1,
        }
    }
}

/// All tuples `n = m₀ ≥ m₁ ≥ … ≥ m_{d−2} ≥ 0`, in lexicographically decreasing order.
pub fn basis_tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![n];
    fn rec(d: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == d - 1 {
            out.push(current.clone());
            return;
        }
        let top = *current.last().unwrap();
        for v in (0..=top).rev() {
            current.push(v);
            rec(d, current, out);
            current.pop();
        }
    }
    rec(d, &mut current, &mut out);
    out
}

/// Real basis of `H_n^d` built from the tensor basis, one element per dimension.
pub fn real_basis(d: usize, n: usize) -> Vec<RealBasisElement> {
    let mut out = Vec::new();
    for m in basis_tuples(d, n) {
        let last = m[d - 2];
        out.push(RealBasisElement {
            m: m.clone(),
            part: Part::Re,
        });
        if last > 0 {
            out.push(RealBasisElement { m, part: Part::Im });
        }
    }
    out
}

/// `dim H_n^d = C(n+d−1, d−1) − C(n+d−3, d−1)`.
pub fn dimension_of_harmonic_space(dims: DimensionParams, n: usize) -> u64 {
    let d = dims.d() as u64;
    let n = n as u64;
    let total = binomial_u64(n + d - 1, d - 1);
    if n >= 2 {
        total - binomial_u64(n + d - 3, d - 1)
    } else {
        total
    }
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Evaluates every element of [`real_basis`] at a point, sharing the Jacobi recurrences.
///
/// Per polar level `k` and each possible `m_k`, one recurrence in the degree produces
/// `sin^{m_k} θ_k P_j^{(α,α)}(cos θ_k)` for all `j ≤ n − m_k`.
#[derive(Debug, Clone)]
pub struct BasisEvaluator {
    d: usize,
    n: usize,
    elements: Vec<RealBasisElement>,
    /// `recurrences[k−1][m_k]` for polar level `k`.
    recurrences: Vec<Vec<JacobiRecurrence>>,
}

impl BasisEvaluator {
    pub fn new(dims: DimensionParams, n: usize) -> Result<Self> {
        let d = dims.d();
        let recurrences = (1..=d - 2)
            .map(|k| {
                (0..=n)
                    .map(|mk| {
                        let a = level_index(d, k, mk);
                        JacobiRecurrence::new(a, a, n - mk)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            d,
            n,
            elements: real_basis(d, n),
            recurrences,
        })
    }

    pub fn elements(&self) -> &[RealBasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Writes the value of every real basis element at `x` into `out`.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.elements.len());
        let d = self.d;
        let n = self.n;
        let angles = Angles::from_point(x);
        // tables[k−1][m_k][j] = sin^{m_k} θ_k · P_j^{(α,α)}(cos θ_k)
        let mut tables: Vec<Vec<Vec<f64>>> = Vec::with_capacity(d - 2);
        for k in 1..=d - 2 {
            let (c, s) = (angles.cos[k - 1], angles.sin[k - 1]);
            let mut level = Vec::with_capacity(n + 1);
            let mut sin_power = 1.0;
            for mk in 0..=n {
                let mut row = vec![0.0; n - mk + 1];
                self.recurrences[k - 1][mk].eval_into(c, &mut row);
                for v in row.iter_mut() {
                    *v *= sin_power;
                }
                level.push(row);
                sin_power *= s;
            }
            tables.push(level);
        }
        let mut az_powers = Vec::with_capacity(n + 1);
        let mut z = Complex64::new(1.0, 0.0);
        for _ in 0..=n {
            az_powers.push(z);
            z *= angles.azimuth;
        }
        for (slot, el) in out.iter_mut().zip(&self.elements) {
            let m = &el.m;
            let mut v = 1.0;
            for k in 1..=d - 2 {
                v *= tables[k - 1][m[k]][m[k - 1] - m[k]];
            }
            let az = az_powers[m[d - 2]];
            *slot = v * match el.part {
                Part::Re => az.re,
                Part::Im => az.im,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dims(d: usize) -> DimensionParams {
        DimensionParams::new(d).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension_of_harmonic_space(dims(3), 4), 9);
        assert_eq!(dimension_of_harmonic_space(dims(4), 2), 9);
        assert_eq!(dimension_of_harmonic_space(dims(3), 0), 1);
        assert_eq!(dimension_of_harmonic_space(dims(5), 1), 5);
        for d in 3..=6 {
            for n in 0..20 {
                assert_eq!(
                    real_basis(d, n).len() as u64,
                    dimension_of_harmonic_space(dims(d), n),
                    "d={d} n={n}"
                );
            }
        }
        // S³: (n+1)².
        for n in 0..30 {
            assert_eq!(dimension_of_harmonic_space(dims(4), n), ((n + 1) * (n + 1)) as u64);
        }
    }

    #[test]
    fn angles_reconstruct_the_point() {
        let x = [0.3, -0.5, 0.1, (1.0f64 - 0.09 - 0.25 - 0.01).sqrt()];
        let a = Angles::from_point(&x);
        let mut sine = 1.0;
        let mut rebuilt = [0.0; 4];
        for k in 0..2 {
            rebuilt[3 - k] = sine * a.cos[k];
            sine *= a.sin[k];
        }
        rebuilt[0] = sine * a.azimuth.re;
        rebuilt[1] = sine * a.azimuth.im;
        for (u, v) in rebuilt.iter().zip(&x) {
            assert!((u - v).abs() < 1e-15);
        }
    }

    #[test]
    fn pole_is_not_degenerate() {
        let a = Angles::from_point(&[0.0, 0.0, 1.0]);
        assert_eq!(a.cos, vec![1.0]);
        assert_eq!(a.sin, vec![0.0]);
        assert_eq!(a.azimuth, Complex64::new(1.0, 0.0));
        let spec = HarmonicSpec::basis(dims(3), vec![3, 1], 1).unwrap();
        assert_eq!(evaluate(&spec, &[0.0, 0.0, 1.0]).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn simple_values() {
        let z = HarmonicSpec::zonal(dims(3), 9);
        assert_relative_eq!(evaluate(&z, &[0.0, 0.0, 1.0]).unwrap().re, 1.0);
        let p = HarmonicSpec::power(dims(3), 2);
        let v = evaluate(&p, &[0.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(v.re, -1.0);
        assert!(v.im.abs() < 1e-16);
        assert!(evaluate(&p, &[1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn degree_one_zonal_basis_is_the_last_coordinate() {
        let spec = HarmonicSpec::basis(dims(3), vec![1, 0], 1).unwrap();
        for &(a, b) in &[(0.3f64, 1.1f64), (1.2, -2.0), (2.9, 0.4)] {
            let x = [a.sin() * f64::cos(b), a.sin() * f64::sin(b), f64::cos(a)];
            let v = evaluate(&spec, &x).unwrap();
            assert!(v.im.abs() < 1e-15);
            // P_1^{(0,0)}(t) = t
            assert_relative_eq!(v.re, x[2], epsilon = 1e-15);
        }
    }

    #[test]
    fn two_sphere_matches_associated_legendre_form() {
        // (n, m) = (3, 2): sin²θ P_1^{(2,2)}(cos θ) e^{2iφ}, P_1^{(2,2)}(t) = 3t.
        let spec = HarmonicSpec::basis(dims(3), vec![3, 2], 1).unwrap();
        let (theta, phi): (f64, f64) = (0.7, 2.1);
        let x = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let v = evaluate(&spec, &x).unwrap();
        let expected = Complex64::from_polar(theta.sin().powi(2) * 3.0 * theta.cos(), 2.0 * phi);
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn evaluator_matches_direct_evaluation() {
        for d in 3..=5 {
            let n = 6;
            let ev = BasisEvaluator::new(dims(d), n).unwrap();
            let raw: Vec<f64> = (0..d).map(|i| (i as f64 * 1.3 + 0.2).sin()).collect();
            let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            let x: Vec<f64> = raw.iter().map(|v| v / norm).collect();
            let mut out = vec![0.0; ev.len()];
            ev.eval_into(&x, &mut out);
            for (el, &v) in ev.elements().iter().zip(&out) {
                let spec = HarmonicSpec::basis(dims(d), el.m.clone(), 1).unwrap();
                let z = evaluate(&spec, &x).unwrap();
                let expected = match el.part {
                    Part::Re => z.re,
                    Part::Im => z.im,
                };
                assert!((v - expected).abs() < 1e-12 * (1.0 + expected.abs()), "{el:?}");
            }
        }
    }
}
