use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::LpIndex;
use crate::quadrature::{sphere_rule_size, DEFAULT_NODE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kernels,
    Quadrature,
    Operators,
    Rates,
    Ratios,
    Exponents,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Kernels,
        Suite::Quadrature,
        Suite::Operators,
        Suite::Rates,
        Suite::Ratios,
        Suite::Exponents,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Kernels => "kernels",
            Suite::Quadrature => "quadrature",
            Suite::Operators => "operators",
            Suite::Rates => "rates",
            Suite::Ratios => "ratios",
            Suite::Exponents => "exponents",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// A `(d, p, q)` request for the witness-ratio suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub d: usize,
    pub p: LpIndex,
    pub q: LpIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    /// Cap on sphere product-rule nodes.
    pub max_sphere_nodes: u128,
    /// Cap on any polynomial degree in a sweep.
    pub max_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_sphere_nodes: DEFAULT_NODE_CAP,
            max_degree: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute window on fitted slopes.
    pub slope: f64,
    /// Relative error of operator identities.
    pub identity: f64,
    /// Allowed max/min (or max/median) spread of empirical constants.
    pub band: f64,
    /// Relative moment-audit error of quadrature rules.
    pub audit: f64,
    /// Relative error of sphere areas and exact arithmetic checks.
    pub exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slope: 0.05,
            identity: 1e-8,
            band: 4.0,
            audit: 1e-10,
            exact: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    /// Where the exponents suite writes the rate table.
    pub rates_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suites: Vec<Suite>,
    /// Dimensions for kernels, quadrature, rates and exponents.
    pub dims: Vec<usize>,
    /// Indices for the power-family slopes.
    pub p_list: Vec<LpIndex>,
    pub ratio_points: Vec<RatioPoint>,
    /// Degrees for slope fits.
    pub n_grid: Vec<usize>,
    /// Degrees for kernel band checks.
    pub kernel_n_grid: Vec<usize>,
    /// Degrees for the `T_n` growth band.
    pub growth_n_grid: Vec<usize>,
    pub operator_dims: Vec<usize>,
    pub operator_degrees: Vec<usize>,
    /// One random harmonic per seed and degree; the first seed also drives the polynomials.
    pub seeds: Vec<u64>,
    pub expansion_polynomials: usize,
    pub expansion_degree: usize,
    pub test_points: usize,
    pub budget: Budget,
    pub tolerances: Tolerances,
    pub output: Outputs,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let idx = |s: &str| s.parse::<LpIndex>().expect("literal index");
        let point = |d, p, q| RatioPoint { d, p: idx(p), q: idx(q) };
        Self {
            suites: Suite::ALL.to_vec(),
            dims: vec![3, 4, 5],
            p_list: vec![idx("1/2"), idx("1"), idx("2"), idx("4")],
            ratio_points: vec![
                point(3, "1", "2"),
                point(3, "2", "4"),
                point(3, "2", "inf"),
                point(3, "1", "inf"),
                point(3, "5", "inf"),
                point(3, "3/2", "inf"),
                point(4, "1", "2"),
                point(4, "1", "inf"),
                point(4, "4", "inf"),
                point(4, "3/2", "inf"),
                point(4, "3", "inf"),
                point(4, "5/2", "3"),
            ],
            n_grid: vec![16, 23, 32, 45, 64, 91, 128, 181, 256],
            kernel_n_grid: vec![8, 16, 32, 64, 128, 256, 512],
            growth_n_grid: vec![8, 16, 32, 64, 128, 256],
            operator_dims: vec![3, 4],
            operator_degrees: vec![2, 4, 8, 16, 24],
            seeds: vec![1, 2, 3],
            expansion_polynomials: 10,
            expansion_degree: 24,
            test_points: 200,
            budget: Budget::default(),
            tolerances: Tolerances::default(),
            output: Outputs::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Parameter checks and the budget precheck; nothing is computed.
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        for (name, v) in [
            ("slope", t.slope),
            ("identity", t.identity),
            ("band", t.band),
            ("audit", t.audit),
            ("exact", t.exact),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        for &d in self.dims.iter().chain(&self.operator_dims).chain(self.ratio_points.iter().map(|r| &r.d)) {
            if !(3..=6).contains(&d) {
                return Err(Error::Config(format!("dimension {d} outside 3..=6")));
            }
        }
        if self.n_grid.len() < 4 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) || self.n_grid[0] == 0 {
            return Err(Error::Config("n_grid needs at least 4 strictly increasing positive degrees".into()));
        }
        for (name, grid) in [("kernel_n_grid", &self.kernel_n_grid), ("growth_n_grid", &self.growth_n_grid)] {
            if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
                return Err(Error::Config(format!("{name} needs at least 2 strictly increasing positive degrees")));
            }
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.test_points == 0 {
            return Err(Error::Config("test_points must be positive".into()));
        }
        self.check_budget()
    }

    fn check_budget(&self) -> Result<()> {
        let cap = self.budget.max_degree;
        let largest = self
            .n_grid
            .iter()
            .chain(&self.kernel_n_grid)
            .chain(&self.growth_n_grid)
            .chain(&self.operator_degrees)
            .chain(std::iter::once(&self.expansion_degree))
            .copied()
            .max()
            .unwrap_or(0);
        if largest > cap {
            return Err(Error::Budget {
                what: "degree grid".into(),
                requested: largest as u128,
                cap: cap as u128,
            });
        }
        if self.suites.contains(&Suite::Operators) {
            for &d in &self.operator_dims {
                let shift = 2 * (d - 2);
                let mut degrees: Vec<usize> = self.operator_degrees.iter().map(|&n| 2 * n + shift).collect();
                if d == 3 {
                    degrees.push(2 * self.expansion_degree + shift);
                }
                for degree in degrees {
                    let (_, _, nodes) = sphere_rule_size(d, degree);
                    if nodes > self.budget.max_sphere_nodes {
                        return Err(Error::Budget {
                            what: format!("sphere rule d={d}, degree {degree}"),
                            requested: nodes,
                            cap: self.budget.max_sphere_nodes,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}
