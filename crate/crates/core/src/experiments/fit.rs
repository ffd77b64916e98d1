use crate::error::{Error, Result};

/// Least-squares line through `(ln n, ln value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub n_grid: Vec<usize>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|ln value − (intercept + slope·ln n)|`.
    pub max_residual: f64,
}

pub fn fit_slope(n_grid: &[usize], values: &[f64]) -> Result<SlopeFit> {
    if n_grid.len() != values.len() {
        return Err(Error::InvalidParameter(format!(
            "{} degrees but {} values",
            n_grid.len(),
            values.len()
        )));
    }
    if n_grid.len() < 4 {
        return Err(Error::DegenerateGrid(format!(
            "slope fit needs at least 4 points, got {}",
            n_grid.len()
        )));
    }
    if n_grid[0] == 0 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DegenerateGrid(
            "degrees must be positive and strictly increasing".into(),
        ));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!("slope fit needs positive values, got {v}")));
    }
    let x: Vec<f64> = n_grid.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let m = x.len() as f64;
    let xbar = x.iter().sum::<f64>() / m;
    let ybar = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|xi| (xi - xbar).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(xi, yi)| (xi - xbar) * (yi - ybar)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateGrid("degrees have zero spread".into()));
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let max_residual = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (yi - intercept - slope * xi).abs())
        .fold(0.0, f64::max);
    Ok(SlopeFit {
        n_grid: n_grid.to_vec(),
        values: values.to_vec(),
        slope,
        intercept,
        max_residual,
    })
}
