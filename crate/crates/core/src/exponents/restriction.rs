use super::index::{r, to_f64, LpIndex, Rational};
use super::regimes::{check_dimension, lambda};
use crate::error::{Error, Result};

/// Exponent `E` of `sup_m m^E` bounding the restriction ratio for `F = f(|x|)|x|^n Y_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictionVerdict {
    pub exponent: Rational,
    pub bounded: bool,
}

/// `E = (d−1)(1/2−1/p) + 1/p′ + λ(1/p−1/q)`; bounded iff `E ≤ 0`.
pub fn restriction_exponent(d: usize, p: LpIndex, q: LpIndex) -> Result<RestrictionVerdict> {
    check_dimension(d)?;
    let u = p.reciprocal();
    let v = q.reciprocal();
    let one = Rational::from_integer(1);
    if u > one {
        return Err(Error::Domain(format!("restriction exponent needs p ≥ 1, got {p}")));
    }
    let exponent = Rational::from_integer(d as i64 - 1) * (r(1, 2) - u) + (one - u) + lambda(d) * (u - v);
    Ok(RestrictionVerdict {
        exponent,
        bounded: exponent <= Rational::from_integer(0),
    })
}

/// `1/q` at the edge `q = (d−1)p′/(d+1)` of the restriction range.
pub fn restriction_q_edge(d: usize, p: LpIndex) -> Result<LpIndex> {
    check_dimension(d)?;
    let one = Rational::from_integer(1);
    let u = p.reciprocal();
    if u >= one {
        return Err(Error::Domain(format!("restriction range needs p > 1, got {p}")));
    }
    LpIndex::from_reciprocal(r(d as i64 + 1, d as i64 - 1) * (one - u))
}

/// Summary of a sweep over the restriction range.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionSweep {
    pub d: usize,
    pub points: usize,
    pub max_exponent: Rational,
    pub all_bounded: bool,
}

/// `n × n` exact points with `1 ≤ p ≤ 2d/(d+1)` and `(d−1)p′/(d+1) ≥ q`: `1/p` runs from
/// `(d+1)/(2d)` to 1 and `1/q` from its edge value to one unit above it.
pub fn restriction_sweep(d: usize, n: usize) -> Result<RestrictionSweep> {
    check_dimension(d)?;
    if n < 2 {
        return Err(Error::DegenerateGrid("restriction sweep needs n ≥ 2".into()));
    }
    let one = Rational::from_integer(1);
    let u0 = r(d as i64 + 1, 2 * d as i64);
    let steps = n as i64 - 1;
    let mut max_exponent: Option<Rational> = None;
    let mut points = 0;
    for i in 0..n as i64 {
        let u = u0 + (one - u0) * r(i, steps);
        let v0 = r(d as i64 + 1, d as i64 - 1) * (one - u);
        for j in 0..n as i64 {
            let v = v0 + r(j, steps);
            let verdict = restriction_exponent(
                d,
                LpIndex::from_reciprocal(u)?,
                LpIndex::from_reciprocal(v)?,
            )?;
            max_exponent = Some(max_exponent.map_or(verdict.exponent, |m| m.max(verdict.exponent)));
            points += 1;
        }
    }
    let max_exponent = max_exponent.expect("nonempty sweep");
    Ok(RestrictionSweep {
        d,
        points,
        max_exponent,
        all_bounded: to_f64(max_exponent) <= 0.0,
    })
}
