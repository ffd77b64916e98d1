pub(crate) mod exponents;
pub(crate) mod kernels;
pub(crate) mod operators;
pub(crate) mod quadrature;
pub(crate) mod rates;
pub(crate) mod ratios;

use super::report::ReportRow;
use crate::error::Result;

/// Mixes a base seed with task coordinates (splitmix64 finalizer).
pub(crate) fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut z = base;
    for &p in parts {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(p);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Turns a failed computation into a failing row instead of aborting the suite.
pub(crate) fn row_or_fail(suite: &str, key: String, row: Result<ReportRow>) -> ReportRow {
    row.unwrap_or_else(|e| ReportRow::failed(suite, key, e.to_string()))
}

/// `max_i |a_i − b_i| / max_i |b_i|`.
pub(crate) fn relative_max_error(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = b.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// `max / min` of positive values.
pub(crate) fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}
