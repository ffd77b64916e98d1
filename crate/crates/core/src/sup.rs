//! Suprema of `|f|` for smooth one-dimensional profiles: dense sampling followed by
//! golden-section refinement around the largest local maxima.

use crate::error::{Error, Result};

/// Number of sampled local maxima that get refined.
const CANDIDATES: usize = 8;
const MAX_ITERATIONS: usize = 200;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// A lower bound for `sup |f|` with the location where it was attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: f64,
    /// Relative spread of `|f|` over the final refinement bracket.
    pub slack: f64,
}

/// Estimates `sup |f|` over `[grid[0], grid[last]]`.
///
/// The grid must be sorted and fine enough that every peak of `|f|` is isolated between
/// neighbouring samples; refinement then converges to the peak itself.
pub fn sup_abs_on_grid<F>(f: F, grid: &[f64]) -> Result<SupEstimate>
where
    F: Fn(f64) -> f64,
{
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty sampling grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "sampling grid must be strictly increasing".into(),
        ));
    }
    let values = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let v = f(x).abs();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite {
                    index: i,
                    point: vec![x],
                    value: v,
                })
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let last = grid.len() - 1;
    let mut peaks: Vec<usize> = (0..=last)
        .filter(|&i| {
            let left = i == 0 || values[i] >= values[i - 1];
            let right = i == last || values[i] >= values[i + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(CANDIDATES);

    let mut best = SupEstimate {
        value: values[peaks[0]],
        argmax: grid[peaks[0]],
        slack: 0.0,
    };
    for &i in &peaks {
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(last)];
        let refined = golden_max(|x| f(x).abs(), lo, hi)?;
        let candidate = if refined.value >= values[i] {
            refined
        } else {
            SupEstimate {
                value: values[i],
                argmax: grid[i],
                slack: refined.slack,
            }
        };
        if candidate.value > best.value {
            best = candidate;
        }
    }
    Ok(best)
}

/// Golden-section search for the maximum of `g` on `[a, b]`.
pub fn golden_max<G>(g: G, mut a: f64, mut b: f64) -> Result<SupEstimate>
where
    G: Fn(f64) -> f64,
{
    if a == b {
        let v = g(a);
        return Ok(SupEstimate {
            value: v,
            argmax: a,
            slack: 0.0,
        });
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..MAX_ITERATIONS {
        if (b - a).abs() <= 4.0 * f64::EPSILON * (1.0 + a.abs().max(b.abs())) {
            let (argmax, value) = if gc >= gd { (c, gc) } else { (d, gd) };
            let spread = (gc - gd).abs();
            return Ok(SupEstimate {
                value,
                argmax,
                slack: if value > 0.0 { spread / value } else { 0.0 },
            });
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
        if !(gc.is_finite() && gd.is_finite()) {
            return Err(Error::NonFinite {
                index: 0,
                point: vec![c, d],
                value: if gc.is_finite() { gd } else { gc },
            });
        }
    }
    Err(Error::Convergence {
        what: "golden-section refinement".into(),
        iterations: MAX_ITERATIONS,
    })
}

/// `n` equally spaced points covering `[a, b]` including both ends.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs at least two points");
    let h = (b - a) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    grid[n - 1] = b;
    grid
}
