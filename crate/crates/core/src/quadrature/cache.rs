use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{gauss_ultraspherical, sphere_product_rule, QuadratureRule, RuleKind};
use crate::error::{Error, Result};
use crate::special_fn::DimensionParams;

/// On-disk store of ultraspherical and sphere-product rules, one text file per
/// `(kind, d, size)`.
///
/// Each file holds a header line `kind d size exactness point_dim` followed by one record
/// per node: the coordinates and then the weight, in `{:.17e}` format so the doubles round
/// trip exactly.
#[derive(Debug, Clone)]
pub struct RuleCache {
    dir: PathBuf,
}

impl RuleCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, kind: RuleKind, d: usize, size: usize) -> PathBuf {
        self.dir.join(format!("{}-d{d}-{size}.txt", kind.tag()))
    }

    /// Gauss ultraspherical rule with `num_nodes` nodes, loaded or built and stored.
    pub fn ultraspherical(&self, dims: DimensionParams, num_nodes: usize) -> Result<QuadratureRule> {
        self.get_or_build(RuleKind::GaussUltraspherical, dims, num_nodes, || {
            gauss_ultraspherical(dims, num_nodes)
        })
    }

    /// Sphere product rule of exactness `max_degree`, loaded or built and stored.
    pub fn sphere(&self, dims: DimensionParams, max_degree: usize) -> Result<QuadratureRule> {
        self.get_or_build(RuleKind::SphereProduct, dims, max_degree, || {
            sphere_product_rule(dims, max_degree)
        })
    }

    fn get_or_build<F>(
        &self,
        kind: RuleKind,
        dims: DimensionParams,
        size: usize,
        build: F,
    ) -> Result<QuadratureRule>
    where
        F: FnOnce() -> Result<QuadratureRule>,
    {
        let path = self.path(kind, dims.d(), size);
        if path.exists() {
            if let Ok(rule) = read_rule(&path, kind, dims) {
                return Ok(rule);
            }
        }
        let rule = build()?;
        write_rule(&path, &rule, dims.d(), size)?;
        Ok(rule)
    }
}

fn write_rule(path: &Path, rule: &QuadratureRule, d: usize, size: usize) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        writeln!(
            out,
            "{} {d} {size} {} {}",
            rule.kind().tag(),
            rule.exactness_degree(),
            rule.point_dim()
        )?;
        for (x, w) in rule.nodes().zip(rule.weights()) {
            for v in x {
                write!(out, "{v:.17e} ")?;
            }
            writeln!(out, "{w:.17e}")?;
        }
        out.flush()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

fn read_rule(path: &Path, kind: RuleKind, dims: DimensionParams) -> Result<QuadratureRule> {
    let file = BufReader::new(fs::File::open(path)?);
    let mut lines = file.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{} is empty", path.display())))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != kind.tag() || fields[1] != dims.d().to_string() {
        return Err(Error::Parse(format!("bad header in {}", path.display())));
    }
    let parse_usize = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    };
    let exactness = parse_usize(fields[3])?;
    let point_dim = parse_usize(fields[4])?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for line in lines {
        let line = line?;
        let values = line
            .split_whitespace()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != point_dim + 1 {
            return Err(Error::Parse(format!("bad record in {}", path.display())));
        }
        nodes.extend_from_slice(&values[..point_dim]);
        weights.push(values[point_dim]);
    }
    let rule = QuadratureRule::from_parts(kind, Some(dims), point_dim, nodes, weights, exactness)?;
    let expected = match kind {
        RuleKind::SphereProduct => dims.sphere_area(),
        _ => ultraspherical_mass(dims),
    };
    if ((rule.total_weight() - expected) / expected).abs() > 1e-12 {
        return Err(Error::Parse(format!("{} has the wrong total weight", path.display())));
    }
    Ok(rule)
}

/// `∫(1−t²)^{(d−3)/2} dt = |S^{d−1}| / |S^{d−2}|`.
fn ultraspherical_mass(dims: DimensionParams) -> f64 {
    dims.sphere_area() / dims.equator_area()
}
