use std::fmt;

use serde::Serialize;

use super::index::{r, to_f64, LpIndex, Rational};
use crate::error::{Error, Result};

/// Parameter cells of `(p, q)` with a single exponent formula for
/// `sup_{Y ∈ H_n^d} ‖Y‖_q / ‖Y‖_p ∼ n^{exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Regime {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv-high")]
    IvHigh,
    #[serde(rename = "iv-low")]
    IvLow,
    #[serde(rename = "open")]
    Open,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::I => "i",
            Regime::II => "ii",
            Regime::III => "iii",
            Regime::IvHigh => "iv-high",
            Regime::IvLow => "iv-low",
            Regime::Open => "open",
        }
    }

    /// The regime's exponent formula at `(u, v) = (1/p, 1/q)`; `None` for the open region.
    pub fn formula(&self, d: usize, u: Rational, v: Rational) -> Option<Rational> {
        let lambda = lambda(d);
        let one = Rational::from_integer(1);
        match self {
            Regime::I | Regime::IvLow => Some(lambda * (u - v)),
            Regime::II | Regime::IvHigh => Some(lambda - (lambda * 2 + one) * v),
            Regime::III => Some((lambda * 2 + one) * (u - v)),
            Regime::Open => None,
        }
    }

    /// The extremal family whose norm ratio grows at this regime's rate.
    pub fn witness(&self) -> Option<WitnessFamily> {
        match self {
            Regime::I | Regime::IvLow => Some(WitnessFamily::Power),
            Regime::II | Regime::IvHigh | Regime::III => Some(WitnessFamily::Zonal),
            Regime::Open => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `(x₁+ix₂)^n` or the zonal harmonic `P_n^{(a,a)}(x·e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum WitnessFamily {
    #[serde(rename = "power")]
    Power,
    #[serde(rename = "zonal")]
    Zonal,
}

impl WitnessFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            WitnessFamily::Power => "power",
            WitnessFamily::Zonal => "zonal",
        }
    }
}

impl fmt::Display for WitnessFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Classification of one `(d, p, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeResult {
    pub d: usize,
    pub p: LpIndex,
    pub q: LpIndex,
    pub regime: Regime,
    /// `None` exactly in the open region.
    pub exponent: Option<Rational>,
    /// Never set by the classifier; the zonal slope predictions carry their own flag.
    pub log_correction: bool,
    pub witness: Option<WitnessFamily>,
    /// `(d−1)(1/p−1/q)`, the only proven bound in the open region.
    pub nikolskii: Rational,
}

impl RegimeResult {
    pub fn exponent_f64(&self) -> Option<f64> {
        self.exponent.map(to_f64)
    }

    /// `nikolskii − exponent`.
    pub fn gap(&self) -> Option<Rational> {
        self.exponent.map(|e| self.nikolskii - e)
    }
}

pub(crate) fn lambda(d: usize) -> Rational {
    r(d as i64 - 2, 2)
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::Domain(format!("dimension d={d} must be at least 3")));
    }
    Ok(())
}

/// Checks `d ≥ 3`, `0 < p < q ≤ ∞` and returns `(1/p, 1/q)`.
pub(crate) fn check_pair(d: usize, p: LpIndex, q: LpIndex) -> Result<(Rational, Rational)> {
    check_dimension(d)?;
    if p.is_infinite() {
        return Err(Error::Domain("p = ∞ leaves no room for q > p".into()));
    }
    if p >= q {
        return Err(Error::Domain(format!("need p < q, got p={p}, q={q}")));
    }
    Ok((p.reciprocal(), q.reciprocal()))
}

/// `(d−1)(1/p−1/q)`.
pub fn nikolskii_rate(d: usize, p: LpIndex, q: LpIndex) -> Result<Rational> {
    let (u, v) = check_pair(d, p, q)?;
    Ok(Rational::from_integer(d as i64 - 1) * (u - v))
}

/// Regime of `(p, q)` and its exponent.
///
/// Where closed conditions overlap the lower-numbered regime wins, except that for `d = 3`
/// the dimension-specific cells `iv-low`/`iv-high` take all of `2 ≤ p ≤ 4`. For `d ≥ 4` the
/// line `p = 2+1/λ` with `q ≤ 2+2/λ` is reported open.
pub fn classify(d: usize, p: LpIndex, q: LpIndex) -> Result<RegimeResult> {
    let (u, v) = check_pair(d, p, q)?;
    let regime = regime_of(d, u, v);
    Ok(RegimeResult {
        d,
        p,
        q,
        regime,
        exponent: regime.formula(d, u, v),
        log_correction: false,
        witness: regime.witness(),
        nikolskii: Rational::from_integer(d as i64 - 1) * (u - v),
    })
}

fn regime_of(d: usize, u: Rational, v: Rational) -> Regime {
    let lambda = lambda(d);
    let one = Rational::from_integer(1);
    let half = r(1, 2);
    let edge = (one - u) * lambda / (lambda + one);
    let critical_p = lambda / (lambda * 2 + one);
    let critical_q = lambda / (lambda * 2 + 2);
    if d == 3 && u >= r(1, 4) && u <= half {
        return if v >= edge { Regime::IvLow } else { Regime::IvHigh };
    }
    if u >= one || (u >= half && v >= edge) {
        Regime::I
    } else if (u >= half && v <= edge) || (u >= critical_p && u <= half && v < critical_q) {
        Regime::II
    } else if u < critical_p {
        Regime::III
    } else {
        Regime::Open
    }
}

/// Every regime whose closed condition contains `(1/p, 1/q)`; on shared boundaries their
/// formulas must agree.
pub fn admissible_regimes(d: usize, p: LpIndex, q: LpIndex) -> Result<Vec<Regime>> {
    let (u, v) = check_pair(d, p, q)?;
    let lambda = lambda(d);
    let one = Rational::from_integer(1);
    let half = r(1, 2);
    let edge = (one - u) * lambda / (lambda + one);
    let critical_p = lambda / (lambda * 2 + one);
    let critical_q = lambda / (lambda * 2 + 2);
    let mut out = Vec::new();
    if u >= one || (u >= half && v >= edge) {
        out.push(Regime::I);
    }
    if (u >= half && u <= one && v <= edge) || (u >= critical_p && u <= half && v <= critical_q) {
        out.push(Regime::II);
    }
    if u <= critical_p {
        out.push(Regime::III);
    }
    if d == 3 && u >= r(1, 4) && u <= half {
        if v <= edge {
            out.push(Regime::IvHigh);
        }
        if v >= edge {
            out.push(Regime::IvLow);
        }
    }
    Ok(out)
}

/// True when `(p, q)` lies in the unresolved rectangle `2 ≤ p ≤ 2+1/λ`, `p < q ≤ 2+2/λ`
/// for `d ≥ 4` (the corner `p = 2` belongs to regime i).
pub fn in_open_rectangle(d: usize, p: LpIndex, q: LpIndex) -> bool {
    if d < 4 {
        return false;
    }
    let lambda = lambda(d);
    let u = p.reciprocal();
    let v = q.reciprocal();
    u < r(1, 2) && u >= lambda / (lambda * 2 + 1) && v >= lambda / (lambda * 2 + 2) && v < u
}

/// The 406 points `(1/p, 1/q) = (i/14, j/14)` with `1 ≤ i ≤ 28`, `0 ≤ j < i`.
pub fn regime_grid() -> Vec<(LpIndex, LpIndex)> {
    let mut out = Vec::new();
    for i in 1..=28 {
        for j in 0..i {
            out.push((
                LpIndex::from_reciprocal(r(i, 14)).expect("positive"),
                LpIndex::from_reciprocal(r(j, 14)).expect("nonnegative"),
            ));
        }
    }
    out
}

/// Points placed exactly on the regime boundaries of dimension `d`.
pub fn boundary_points(d: usize) -> Vec<(LpIndex, LpIndex)> {
    let lambda = lambda(d);
    let one = Rational::from_integer(1);
    let critical_p = lambda / (lambda * 2 + one);
    let critical_q = lambda / (lambda * 2 + 2);
    let mut uv: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..=20 {
        let t = r(i, 20);
        // q = (1+1/λ)p′ for 1 ≤ p ≤ 2
        let u = r(1, 2) + t / 2;
        uv.push((u, (one - u) * lambda / (lambda + one)));
        // p = 2+1/λ
        uv.push((critical_p, critical_p * t));
        // q = 2+2/λ for 2 ≤ p ≤ 2+1/λ
        uv.push((critical_p + (r(1, 2) - critical_p) * t, critical_q));
        // p = 1 and p = 2
        uv.push((one, t));
        uv.push((r(1, 2), t / 2));
        if d == 3 {
            uv.push((r(1, 4), t / 4));
            let u = r(1, 4) + t / 4;
            uv.push((u, (one - u) / 3));
        }
    }
    uv.into_iter()
        .filter(|(u, v)| v < u && *v >= Rational::from_integer(0))
        .map(|(u, v)| {
            (
                LpIndex::from_reciprocal(u).expect("positive"),
                LpIndex::from_reciprocal(v).expect("nonnegative"),
            )
        })
        .collect()
}
