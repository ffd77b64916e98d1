use std::fmt;

use super::index::{r, LpIndex, Rational};
use super::regimes::{check_dimension, lambda, WitnessFamily};
use crate::error::{Error, Result};

/// Predicted growth exponent of `‖f_n‖_p` along an extremal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySlope {
    pub slope: Rational,
    /// At the zonal critical index `p = 2+1/λ` the norm carries an extra `(log n)^{1/p}`.
    pub log_critical: bool,
}

/// `p_c = 2+1/λ = 2(d−1)/(d−2)`, where the zonal norms change behaviour.
pub fn zonal_critical_index(d: usize) -> Result<LpIndex> {
    check_dimension(d)?;
    let lambda = lambda(d);
    LpIndex::finite(Rational::from_integer(2) + lambda.recip())
}

/// Slope of `log ‖f_n‖_p` against `log n`.
///
/// Power family `(x₁+ix₂)^n`: `−λ/p`. Zonal `P_n^{(a,a)}(x·e)`: `(d−3)/2 − (d−1)/p` above
/// `p_c`, `−1/2` below it, both (with a log factor) at `p_c`.
pub fn family_slope(d: usize, family: WitnessFamily, p: LpIndex) -> Result<FamilySlope> {
    check_dimension(d)?;
    let u = p.reciprocal();
    let lambda = lambda(d);
    Ok(match family {
        WitnessFamily::Power => FamilySlope {
            slope: -lambda * u,
            log_critical: false,
        },
        WitnessFamily::Zonal => {
            let uc = zonal_critical_index(d)?.reciprocal();
            if u > uc {
                FamilySlope {
                    slope: r(-1, 2),
                    log_critical: false,
                }
            } else {
                FamilySlope {
                    slope: r(d as i64 - 3, 2) - Rational::from_integer(d as i64 - 1) * u,
                    log_critical: u == uc,
                }
            }
        }
    })
}

/// Slope of `‖f_n‖_q / ‖f_n‖_p` for a family; log-critical if either index is.
pub fn family_ratio_slope(
    d: usize,
    family: WitnessFamily,
    p: LpIndex,
    q: LpIndex,
) -> Result<FamilySlope> {
    let a = family_slope(d, family, p)?;
    let b = family_slope(d, family, q)?;
    Ok(FamilySlope {
        slope: b.slope - a.slope,
        log_critical: a.log_critical || b.log_critical,
    })
}

/// The four cases of the `L^p → L²` and `L² → L^q` operator norms of `proj_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SoggeCase {
    /// `L^p → L²`, `1 ≤ p ≤ p_λ`.
    I,
    /// `L^p → L²`, `p_λ ≤ p ≤ 2`.
    II,
    /// `L² → L^q`, `2+2/λ ≤ q ≤ ∞`.
    III,
    /// `L² → L^q`, `2 ≤ q ≤ 2+2/λ`.
    IV,
}

impl fmt::Display for SoggeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SoggeCase::I => "i",
            SoggeCase::II => "ii",
            SoggeCase::III => "iii",
            SoggeCase::IV => "iv",
        })
    }
}

/// Which side of `L²` the varying index sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionSide {
    /// `‖proj_n f‖_2 ≤ C n^{e} ‖f‖_p`.
    FromLp(LpIndex),
    /// `‖proj_n f‖_q ≤ C n^{e} ‖f‖_2`.
    ToLq(LpIndex),
}

/// A quoted reference rate; the crate does not certify operator norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionRate {
    pub case: SoggeCase,
    pub exponent: Rational,
    pub reference_only: bool,
}

/// `p_λ = 1+λ/(λ+2)`.
pub fn sogge_p_lambda(d: usize) -> Result<LpIndex> {
    check_dimension(d)?;
    let lambda = lambda(d);
    LpIndex::finite(Rational::from_integer(1) + lambda / (lambda + 2))
}

/// Exponent of a given case, provided the index lies in that case's closed range.
pub fn sogge_case_exponent(d: usize, case: SoggeCase, index: LpIndex) -> Result<Rational> {
    check_dimension(d)?;
    let lambda = lambda(d);
    let one = Rational::from_integer(1);
    let half = r(1, 2);
    let w = index.reciprocal();
    let p_lambda = sogge_p_lambda(d)?.reciprocal();
    let q_edge = lambda / (lambda * 2 + 2);
    let in_range = match case {
        SoggeCase::I => w <= one && w >= p_lambda,
        SoggeCase::II => w <= p_lambda && w >= half,
        SoggeCase::III => w <= q_edge,
        SoggeCase::IV => w >= q_edge && w <= half,
    };
    if !in_range {
        return Err(Error::Domain(format!("index {index} is outside case {case} for d={d}")));
    }
    Ok(match case {
        SoggeCase::I => (lambda * 2 + one) * (w - half) - half,
        SoggeCase::II => lambda * (w - half),
        SoggeCase::III => (lambda * 2 + one) * (half - w) - half,
        SoggeCase::IV => lambda * (half - w),
    })
}

/// Reference exponent for `proj_n`, choosing the case from the index (lower case on the
/// shared endpoint, where both agree).
pub fn sogge_projection_rate(d: usize, side: ProjectionSide) -> Result<ProjectionRate> {
    check_dimension(d)?;
    let (case, index) = match side {
        ProjectionSide::FromLp(p) => {
            let w = p.reciprocal();
            if w > Rational::from_integer(1) || w < r(1, 2) {
                return Err(Error::Domain(format!("L^p → L² rates need 1 ≤ p ≤ 2, got {p}")));
            }
            let case = if w >= sogge_p_lambda(d)?.reciprocal() { SoggeCase::I } else { SoggeCase::II };
            (case, p)
        }
        ProjectionSide::ToLq(q) => {
            let w = q.reciprocal();
            if w > r(1, 2) {
                return Err(Error::Domain(format!("L² → L^q rates need q ≥ 2, got {q}")));
            }
            let lambda = lambda(d);
            let case = if w <= lambda / (lambda * 2 + 2) { SoggeCase::III } else { SoggeCase::IV };
            (case, q)
        }
    };
    Ok(ProjectionRate {
        case,
        exponent: sogge_case_exponent(d, case, index)?,
        reference_only: true,
    })
}

/// `sup ‖Y‖_q/‖Y‖_2` over `H_n^d`: `λ(1/2−1/q)` up to `q = 2+2/λ`, `2λ(1/2−1/q)−1/q` beyond.
pub fn sogge_q_rate(d: usize, q: LpIndex) -> Result<Rational> {
    check_dimension(d)?;
    let v = q.reciprocal();
    if v > r(1, 2) {
        return Err(Error::Domain(format!("need q ≥ 2, got {q}")));
    }
    let lambda = lambda(d);
    let half = r(1, 2);
    Ok(if v >= lambda / (lambda * 2 + 2) {
        lambda * (half - v)
    } else {
        lambda * 2 * (half - v) - v
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::classify;
    use crate::exponents::regimes::{regime_grid, Regime};

    fn idx(s: &str) -> LpIndex {
        s.parse().unwrap()
    }

    #[test]
    fn documented_slopes() {
        assert_eq!(family_slope(3, WitnessFamily::Power, idx("2")).unwrap().slope, r(-1, 4));
        assert_eq!(family_slope(3, WitnessFamily::Zonal, idx("8")).unwrap().slope, r(-1, 4));
        assert_eq!(family_slope(4, WitnessFamily::Zonal, idx("2")).unwrap().slope, r(-1, 2));
        let crit = family_slope(4, WitnessFamily::Zonal, idx("3")).unwrap();
        assert!(crit.log_critical);
        assert_eq!(crit.slope, r(-1, 2));
        assert_eq!(family_slope(5, WitnessFamily::Zonal, idx("inf")).unwrap().slope, Rational::from_integer(1));
    }

    #[test]
    fn projection_rate_examples() {
        let a = sogge_projection_rate(3, ProjectionSide::ToLq(idx("4"))).unwrap();
        assert_eq!(a.case, SoggeCase::IV);
        assert_eq!(a.exponent, r(1, 8));
        let p = sogge_p_lambda(3).unwrap();
        assert_eq!(p, idx("6/5"));
        assert_eq!(
            sogge_case_exponent(3, SoggeCase::I, p).unwrap(),
            sogge_case_exponent(3, SoggeCase::II, p).unwrap()
        );
        let c = sogge_projection_rate(4, ProjectionSide::ToLq(idx("inf"))).unwrap();
        assert_eq!((c.case, c.exponent), (SoggeCase::III, Rational::from_integer(1)));
        assert!(c.reference_only);
        assert!(sogge_projection_rate(3, ProjectionSide::FromLp(idx("3"))).is_err());
        assert!(sogge_case_exponent(3, SoggeCase::I, idx("2")).is_err());
    }

    #[test]
    fn q_rate_is_continuous_at_threshold() {
        for d in 3..=6 {
            let lambda = lambda(d);
            let q = LpIndex::finite(Rational::from_integer(2) + lambda.recip() * 2).unwrap();
            let v = q.reciprocal();
            assert_eq!(lambda * (r(1, 2) - v), lambda * 2 * (r(1, 2) - v) - v);
            assert_eq!(sogge_q_rate(d, idx("2")).unwrap(), Rational::from_integer(0));
        }
        assert_eq!(sogge_q_rate(3, idx("inf")).unwrap(), r(1, 2));
    }

    #[test]
    fn witness_slopes_reproduce_exponents() {
        for d in 3..=5 {
            for (p, q) in regime_grid() {
                let res = classify(d, p, q).unwrap();
                let (Some(e), Some(w)) = (res.exponent, res.witness) else { continue };
                let s = family_ratio_slope(d, w, p, q).unwrap();
                assert_eq!(s.slope, e, "d={d} p={p} q={q} {:?}", res.regime);
                if matches!(res.regime, Regime::I | Regime::IvLow) {
                    assert_eq!(w, WitnessFamily::Power);
                }
            }
        }
    }
}
