use std::io::Write;

use super::index::{r, LpIndex, Rational};
use super::rates::{sogge_projection_rate, sogge_q_rate, ProjectionRate, ProjectionSide};
use super::regimes::{classify, RegimeResult};
use crate::error::Result;

/// One classified `(d, p, q)` with the reference rates that apply to it.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub result: RegimeResult,
    /// `sup ‖Y‖_q/‖Y‖_2`, for `q ≥ 2`.
    pub sogge_q_rate: Option<Rational>,
    /// `proj_n : L^p → L²`, for `1 ≤ p ≤ 2`.
    pub projection_rate: Option<ProjectionRate>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
}

/// `p, q ∈ {1/2, 1, 6/5, 4/3, 3/2, 2, 5/2, 3, 4, 5, 6, 8, ∞}`.
pub fn default_indices() -> Vec<LpIndex> {
    let finite = [r(1, 2), r(1, 1), r(6, 5), r(4, 3), r(3, 2), r(2, 1), r(5, 2), r(3, 1), r(4, 1), r(5, 1), r(6, 1), r(8, 1)];
    let mut out: Vec<LpIndex> = finite.iter().map(|&p| LpIndex::finite(p).expect("positive")).collect();
    out.push(LpIndex::infinity());
    out
}

impl RateTable {
    /// All pairs `p < q` drawn from `indices`, for each dimension.
    pub fn build(dims: &[usize], indices: &[LpIndex]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut rows = Vec::new();
        for &d in dims {
            for (i, &p) in sorted.iter().enumerate() {
                for &q in &sorted[i + 1..] {
                    let result = classify(d, p, q)?;
                    let sogge_q_rate = sogge_q_rate(d, q).ok();
                    let projection_rate = sogge_projection_rate(d, ProjectionSide::FromLp(p)).ok();
                    rows.push(RateRow {
                        result,
                        sogge_q_rate,
                        projection_rate,
                    });
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn for_dimension(d: usize) -> Result<Self> {
        Self::build(&[d], &default_indices())
    }

    /// CSV with columns `d,p,q,regime,exponent,nikolskii,gap,witness`; exponents are exact
    /// rationals and open cells read `open`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["d", "p", "q", "regime", "exponent", "nikolskii", "gap", "witness"])?;
        for row in &self.rows {
            let res = &row.result;
            let open = || "open".to_string();
            w.write_record([
                res.d.to_string(),
                res.p.to_string(),
                res.q.to_string(),
                res.regime.to_string(),
                res.exponent.map_or_else(open, |e| e.to_string()),
                res.nikolskii.to_string(),
                res.gap().map_or_else(open, |g| g.to_string()),
                res.witness.map_or_else(open, |f| f.to_string()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_fixed_columns_and_explicit_open_cells() {
        let table = RateTable::for_dimension(4).unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "d,p,q,regime,exponent,nikolskii,gap,witness");
        assert!(text.contains("4,5/2,3,open,open,"));
        assert!(text.contains("4,1,2,i,1/2,3/2,1,power"));
        assert_eq!(text.lines().count(), 1 + 13 * 12 / 2);
    }

    #[test]
    fn reference_rates_attach_where_defined() {
        let table = RateTable::for_dimension(3).unwrap();
        for row in &table.rows {
            assert_eq!(row.sogge_q_rate.is_some(), row.result.q.reciprocal() <= r(1, 2));
            let u = row.result.p.reciprocal();
            assert_eq!(row.projection_rate.is_some(), u >= r(1, 2) && u <= r(1, 1));
        }
    }
}
