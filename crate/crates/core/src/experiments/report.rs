use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Open-region or log-critical requests; never fitted.
    Refused,
    /// Measured constants reported without a pass/fail claim.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Refused => "refused",
            Status::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub suite: String,
    pub key: String,
    pub measured: Option<f64>,
    pub predicted: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
    pub detail: String,
}

impl ReportRow {
    /// Passes iff `|measured − predicted| ≤ tolerance`.
    pub fn compare(suite: &str, key: impl Into<String>, measured: f64, predicted: f64, tolerance: f64) -> Self {
        let ok = (measured - predicted).abs() <= tolerance;
        Self::with_status(suite, key, Some(measured), Some(predicted), Some(tolerance), ok)
    }

    /// Passes iff `measured ≤ bound`.
    pub fn at_most(suite: &str, key: impl Into<String>, measured: f64, bound: f64) -> Self {
        let ok = measured <= bound;
        Self::with_status(suite, key, Some(measured), None, Some(bound), ok)
    }

    pub fn info(suite: &str, key: impl Into<String>, measured: f64) -> Self {
        Self {
            suite: suite.into(),
            key: key.into(),
            measured: Some(measured),
            predicted: None,
            tolerance: None,
            status: Status::Info,
            detail: String::new(),
        }
    }

    pub fn refused(suite: &str, key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            key: key.into(),
            measured: None,
            predicted: None,
            tolerance: None,
            status: Status::Refused,
            detail: reason.into(),
        }
    }

    pub fn failed(suite: &str, key: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            key: key.into(),
            measured: None,
            predicted: None,
            tolerance: None,
            status: Status::Fail,
            detail: reason.into(),
        }
    }

    fn with_status(
        suite: &str,
        key: impl Into<String>,
        measured: Option<f64>,
        predicted: Option<f64>,
        tolerance: Option<f64>,
        ok: bool,
    ) -> Self {
        Self {
            suite: suite.into(),
            key: key.into(),
            measured,
            predicted,
            tolerance,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: String::new(),
        }
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

/// Rows from one or more suites, kept sorted by `(suite, key)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

fn number(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12e}")).unwrap_or_default()
}

impl Report {
    pub fn new(mut rows: Vec<ReportRow>) -> Self {
        rows.sort_by(|a, b| (&a.suite, &a.key).cmp(&(&b.suite, &b.key)));
        Self { rows }
    }

    pub fn extend(&mut self, rows: Vec<ReportRow>) {
        self.rows.extend(rows);
        self.rows.sort_by(|a, b| (&a.suite, &a.key).cmp(&(&b.suite, &b.key)));
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }

    /// Columns `suite,key,measured,predicted,tolerance,status,detail`; numbers as `{:.12e}`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["suite", "key", "measured", "predicted", "tolerance", "status", "detail"])?;
        for r in &self.rows {
            w.write_record([
                r.suite.clone(),
                r.key.clone(),
                number(r.measured),
                number(r.predicted),
                number(r.tolerance),
                r.status.to_string(),
                r.detail.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.rows)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        self.write_json(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}
