use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special_fn::DimensionParams;

/// Tolerance on `|x| = 1` for points handed to the harmonic evaluators.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A point of `S^{d−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Accepts coordinates whose Euclidean norm is 1 within `1e−12`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = euclidean_norm(&coords);
        if coords.is_empty() || !((norm - 1.0).abs() <= UNIT_TOLERANCE) {
            return Err(Error::Domain(format!(
                "point {coords:?} is not on the unit sphere (norm {norm})"
            )));
        }
        Ok(Self { coords })
    }

    /// Scales a nonzero vector onto the sphere.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        let norm = euclidean_norm(&coords);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain(format!("cannot normalize {coords:?}")));
        }
        Ok(Self {
            coords: coords.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// `(0, …, 0, 1)`.
    pub fn north_pole(d: usize) -> Self {
        let mut coords = vec![0.0; d];
        coords[d - 1] = 1.0;
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.coords.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

pub(crate) fn euclidean_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Which harmonic a [`HarmonicSpec`] names.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Tensor basis element with tuple `m₀ ≥ m₁ ≥ … ≥ m_{d−2} ≥ 0` and azimuthal factor
    /// `e^{±i m_{d−2} φ}`.
    Basis { m: Vec<usize>, sign: i8 },
    /// `f_n = (x₁ + i x₂)^n`.
    Power { n: usize },
    /// `g_n = P_n^{((d−3)/2,(d−3)/2)}(x·e)`.
    Zonal { n: usize, pole: SpherePoint },
}

/// A single harmonic of degree `n` on `S^{d−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpec {
    dims: DimensionParams,
    family: Family,
}

impl HarmonicSpec {
    pub fn basis(dims: DimensionParams, m: Vec<usize>, sign: i8) -> Result<Self> {
        let d = dims.d();
        if m.len() != d - 1 {
            return Err(Error::InvalidParameter(format!(
                "basis tuple for d={d} needs {} entries, got {}",
                d - 1,
                m.len()
            )));
        }
        if m.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!(
                "basis tuple {m:?} must be nonincreasing"
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!("azimuthal sign must be ±1, got {sign}")));
        }
        Ok(Self {
            dims,
            family: Family::Basis { m, sign },
        })
    }

    pub fn power(dims: DimensionParams, n: usize) -> Self {
        Self {
            dims,
            family: Family::Power { n },
        }
    }

    /// Zonal harmonic about the north pole.
    pub fn zonal(dims: DimensionParams, n: usize) -> Self {
        Self {
            dims,
            family: Family::Zonal {
                n,
                pole: SpherePoint::north_pole(dims.d()),
            },
        }
    }

    pub fn zonal_about(dims: DimensionParams, n: usize, pole: SpherePoint) -> Result<Self> {
        if pole.dim() != dims.d() {
            return Err(Error::InvalidParameter(format!(
                "pole has {} coordinates, expected {}",
                pole.dim(),
                dims.d()
            )));
        }
        Ok(Self {
            dims,
            family: Family::Zonal { n, pole },
        })
    }

    pub fn dims(&self) -> DimensionParams {
        self.dims
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn degree(&self) -> usize {
        match &self.family {
            Family::Basis { m, .. } => m[0],
            Family::Power { n } | Family::Zonal { n, .. } => *n,
        }
    }
}

impl fmt::Display for HarmonicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dims.d();
        match &self.family {
            Family::Basis { m, sign } => {
                let tuple: Vec<String> = m.iter().map(|v| v.to_string()).collect();
                let s = if *sign > 0 { '+' } else { '-' };
                write!(f, "basis:d={d},m={},sign={s}", tuple.join(","))
            }
            Family::Power { n } => write!(f, "power:d={d},n={n}"),
            Family::Zonal { n, pole } => {
                write!(f, "zonal:d={d},n={n}")?;
                if *pole != SpherePoint::north_pole(d) {
                    let c: Vec<String> = pole.coords().iter().map(|v| format!("{v:?}")).collect();
                    write!(f, ",pole={}", c.join(","))?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for HarmonicSpec {
    type Err = Error;

    /// Parses `zonal:d=3,n=12[,pole=x,y,z]`, `power:d=4,n=32`, `basis:d=3,m=5,3,sign=+`.
    /// Bare values after a key extend that key's list.
    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing family prefix in {s:?}")))?;
        let mut fields: Vec<(String, Vec<String>)> = Vec::new();
        for token in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token.split_once('=') {
                Some((k, v)) => fields.push((k.trim().to_string(), vec![v.trim().to_string()])),
                None => match fields.last_mut() {
                    Some((_, values)) => values.push(token.to_string()),
                    None => return Err(Error::Parse(format!("value {token:?} without a key"))),
                },
            }
        }
        let get = |key: &str| -> Option<&Vec<String>> {
            fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
        };
        let single = |key: &str| -> Result<&str> {
            match get(key) {
                Some(v) if v.len() == 1 => Ok(v[0].as_str()),
                Some(_) => Err(Error::Parse(format!("{key} takes a single value"))),
                None => Err(Error::Parse(format!("missing {key}= in {s:?}"))),
            }
        };
        let parse_usize = |key: &str, v: &str| {
            v.parse::<usize>()
                .map_err(|_| Error::Parse(format!("{key}={v} is not a nonnegative integer")))
        };
        if let Some((unknown, _)) = fields
            .iter()
            .find(|(k, _)| !["d", "n", "m", "sign", "pole"].contains(&k.as_str()))
        {
            return Err(Error::Parse(format!("unknown field {unknown:?}")));
        }
        let dims = DimensionParams::new(parse_usize("d", single("d")?)?)?;
        match family.trim() {
            "power" => Ok(Self::power(dims, parse_usize("n", single("n")?)?)),
            "zonal" => {
                let n = parse_usize("n", single("n")?)?;
                match get("pole") {
                    None => Ok(Self::zonal(dims, n)),
                    Some(values) => {
                        let coords = values
                            .iter()
                            .map(|v| {
                                v.parse::<f64>()
                                    .map_err(|_| Error::Parse(format!("bad pole coordinate {v:?}")))
                            })
                            .collect::<Result<Vec<f64>>>()?;
                        Self::zonal_about(dims, n, SpherePoint::new(coords)?)
                    }
                }
            }
            "basis" => {
                let m = get("m")
                    .ok_or_else(|| Error::Parse("basis needs m=…".into()))?
                    .iter()
                    .map(|v| parse_usize("m", v))
                    .collect::<Result<Vec<usize>>>()?;
                let sign = match get("sign").map(|v| v.as_slice()) {
                    None => 1,
                    Some([s]) if s == "+" || s == "+1" || s == "1" => 1,
                    Some([s]) if s == "-" || s == "-1" => -1,
                    Some(other) => {
                        return Err(Error::Parse(format!("bad sign {other:?}")));
                    }
                };
                Self::basis(dims, m, sign)
            }
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_forms() {
        let z: HarmonicSpec = "zonal:d=3,n=12".parse().unwrap();
        assert_eq!(z.degree(), 12);
        assert!(matches!(z.family(), Family::Zonal { n: 12, .. }));
        let p: HarmonicSpec = "power:d=4,n=32".parse().unwrap();
        assert_eq!(p.dims().d(), 4);
        let b: HarmonicSpec = "basis:d=3,m=5,3,sign=+".parse().unwrap();
        assert_eq!(b.family(), &Family::Basis { m: vec![5, 3], sign: 1 });
        let zp: HarmonicSpec = "zonal:d=3,n=2,pole=1,0,0".parse().unwrap();
        assert_eq!(zp.to_string(), "zonal:d=3,n=2,pole=1.0,0.0,0.0");
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "zonal:n=3",
            "zonal:d=2,n=3",
            "basis:d=3,m=2,5",
            "basis:d=4,m=2,1",
            "basis:d=3,m=2,1,sign=x",
            "sphere:d=3,n=1",
            "power:d=3,n=-1",
            "zonal:d=3,n=1,pole=1,1,0",
            "power:d=3,n=1,q=2",
        ] {
            assert!(bad.parse::<HarmonicSpec>().is_err(), "{bad}");
        }
    }

    fn arb_spec() -> impl Strategy<Value = HarmonicSpec> {
        (3usize..=6, 0usize..40, any::<bool>(), 0u8..3).prop_flat_map(|(d, n, plus, family)| {
            let dims = DimensionParams::new(d).unwrap();
            let tail = proptest::collection::vec(0usize..=n, d - 2);
            (Just(dims), Just(n), Just(plus), Just(family), tail)
        })
        .prop_map(|(dims, n, plus, family, mut tail)| match family {
            0 => HarmonicSpec::power(dims, n),
            1 => HarmonicSpec::zonal(dims, n),
            _ => {
                tail.sort_unstable_by(|a, b| b.cmp(a));
                let mut m = vec![n];
                m.extend(tail);
                HarmonicSpec::basis(dims, m, if plus { 1 } else { -1 }).unwrap()
            }
        })
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(spec in arb_spec()) {
            let text = spec.to_string();
            let back: HarmonicSpec = text.parse().unwrap();
            prop_assert_eq!(back, spec);
        }

        #[test]
        fn normalized_points_are_unit(v in proptest::collection::vec(-10.0f64..10.0, 3..7)) {
            prop_assume!(euclidean_norm(&v) > 1e-3);
            let p = SpherePoint::normalized(v).unwrap();
            prop_assert!((euclidean_norm(p.coords()) - 1.0).abs() <= UNIT_TOLERANCE);
        }
    }
}
