use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational used for all exponent arithmetic.
pub type Rational = Ratio<i64>;

pub(crate) fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub(crate) fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// A Lebesgue index `0 < p ≤ ∞`, stored as its reciprocal so that `p = ∞` is the exact
/// value `1/p = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LpIndex {
    recip: Rational,
}

impl LpIndex {
    pub fn infinity() -> Self {
        Self {
            recip: Rational::from_integer(0),
        }
    }

    pub fn finite(p: Rational) -> Result<Self> {
        if p <= Rational::from_integer(0) {
            return Err(Error::Domain(format!("Lebesgue index must be positive, got {p}")));
        }
        Ok(Self { recip: p.recip() })
    }

    pub fn integer(p: i64) -> Result<Self> {
        Self::finite(Rational::from_integer(p))
    }

    pub fn from_reciprocal(u: Rational) -> Result<Self> {
        if u < Rational::from_integer(0) {
            return Err(Error::Domain(format!("1/p must be nonnegative, got {u}")));
        }
        Ok(Self { recip: u })
    }

    /// Nearest small rational to a float; `f64::INFINITY` maps to `∞`.
    pub fn from_f64(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(Self::infinity());
        }
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::Domain(format!("Lebesgue index must be positive, got {p}")));
        }
        let exact = Rational::approximate_float(p)
            .ok_or_else(|| Error::Domain(format!("{p} has no rational approximation")))?;
        Self::finite(exact)
    }

    /// `1/p`.
    pub fn reciprocal(&self) -> Rational {
        self.recip
    }

    pub fn is_infinite(&self) -> bool {
        *self.recip.numer() == 0
    }

    pub fn value(&self) -> Option<Rational> {
        (!self.is_infinite()).then(|| self.recip.recip())
    }

    pub fn to_f64(&self) -> f64 {
        match self.value() {
            Some(p) => to_f64(p),
            None => f64::INFINITY,
        }
    }

    /// `p′` with `1/p + 1/p′ = 1`; defined for `p ≥ 1`.
    pub fn conjugate(&self) -> Result<Self> {
        let one = Rational::from_integer(1);
        if self.recip > one {
            return Err(Error::Domain(format!("p = {self} < 1 has no conjugate index")));
        }
        Ok(Self {
            recip: one - self.recip,
        })
    }
}

impl PartialOrd for LpIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LpIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        other.recip.cmp(&self.recip)
    }
}

impl fmt::Display for LpIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for LpIndex {
    type Err = Error;

    /// Accepts `inf`, `∞`, integers, fractions `a/b` and decimals like `2.5` (parsed exactly).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity") || s == "∞" {
            return Ok(Self::infinity());
        }
        let bad = || Error::Parse(format!("not a Lebesgue index: {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            return Self::finite(Rational::new(a, b));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10i64.pow(frac.len() as u32);
            let whole: i64 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
            let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            let numer = whole
                .checked_mul(scale)
                .and_then(|w| w.checked_add(frac))
                .ok_or_else(bad)?;
            return Self::finite(Rational::new(numer, scale));
        }
        Self::finite(Rational::from_integer(s.parse().map_err(|_| bad())?))
    }
}

impl Serialize for LpIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LpIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct IndexVisitor;

        impl Visitor<'_> for IndexVisitor {
            type Value = LpIndex;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive number or a string such as \"3/2\" or \"inf\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<LpIndex, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<LpIndex, E> {
                let v = i64::try_from(v).map_err(E::custom)?;
                LpIndex::integer(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<LpIndex, E> {
                LpIndex::integer(v).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<LpIndex, E> {
                LpIndex::from_f64(v).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(IndexVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_is_exact() {
        assert_eq!("2.5".parse::<LpIndex>().unwrap().reciprocal(), r(2, 5));
        assert_eq!("3/2".parse::<LpIndex>().unwrap().reciprocal(), r(2, 3));
        assert!("inf".parse::<LpIndex>().unwrap().is_infinite());
        assert!("∞".parse::<LpIndex>().unwrap().is_infinite());
        assert_eq!(".5".parse::<LpIndex>().unwrap().reciprocal(), r(2, 1));
        assert!("0".parse::<LpIndex>().is_err());
        assert!("-1".parse::<LpIndex>().is_err());
        assert!("x".parse::<LpIndex>().is_err());
    }

    #[test]
    fn conjugates() {
        assert!(LpIndex::integer(1).unwrap().conjugate().unwrap().is_infinite());
        assert_eq!(LpIndex::integer(2).unwrap().conjugate().unwrap(), LpIndex::integer(2).unwrap());
        assert_eq!(LpIndex::infinity().conjugate().unwrap(), LpIndex::integer(1).unwrap());
        assert!(LpIndex::finite(r(1, 2)).unwrap().conjugate().is_err());
    }

    #[test]
    fn ordering_and_display() {
        let a = LpIndex::integer(2).unwrap();
        let b = LpIndex::infinity();
        assert!(a < b);
        assert_eq!(b.to_string(), "inf");
        assert_eq!(LpIndex::finite(r(5, 2)).unwrap().to_string(), "5/2");
        assert_eq!(LpIndex::from_f64(0.5).unwrap().to_string(), "1/2");
    }

    #[test]
    fn serde_accepts_numbers_and_strings() {
        let v: Vec<LpIndex> = serde_json::from_str(r#"[1, 2.5, "inf", "4/3"]"#).unwrap();
        assert_eq!(v[1].reciprocal(), r(2, 5));
        assert!(v[2].is_infinite());
        assert_eq!(serde_json::to_string(&v[3]).unwrap(), "\"4/3\"");
    }
}
