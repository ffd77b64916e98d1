use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sphrh::error::{Error, Result};
use sphrh::experiments::{error_exit_code, exit_code, run_suite, ExperimentConfig, Status, Suite};
use sphrh::exponents::{pitt_constant, LpIndex, PittRatio, RateTable};
use sphrh::harmonics::{evaluate, lp_norm, HarmonicSpec, NormBudget, Part, RealHarmonic, SphereFunction};
use sphrh::operators::{project, t_operator, test_points, AppliedOperator};

#[derive(Parser)]
#[command(name = "sphrh", version, about = "Norms, operators and exponent tables for spherical harmonics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a harmonic at a point, printing real and imaginary parts.
    Eval {
        spec: HarmonicSpec,
        /// Comma-separated coordinates of a unit vector.
        #[arg(long, value_parser = parse_point)]
        point: Point,
    },
    /// L^p norm (quasi-norm for p < 1, sup for p = inf) with respect to dσ.
    Norm {
        spec: HarmonicSpec,
        #[arg(short = 'p')]
        p: LpIndex,
    },
    /// proj_k applied to the real part of a harmonic.
    Project {
        #[arg(short = 'k')]
        k: usize,
        spec: HarmonicSpec,
        #[arg(long = "point", value_parser = parse_point)]
        points: Vec<Point>,
    },
    /// T_n applied to the real part of a harmonic.
    Toperator {
        #[arg(short = 'n')]
        n: usize,
        spec: HarmonicSpec,
        #[arg(long = "point", value_parser = parse_point)]
        points: Vec<Point>,
    },
    /// Regime table for one dimension.
    Regimes {
        #[arg(short = 'd')]
        d: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run verification suites; exit 0 on pass, 1 on any failure, 2 on configuration errors.
    Verify {
        /// all, kernels, quadrature, operators, rates, ratios or exponents; repeatable.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// JSON file with experiment settings; unspecified fields keep their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the report as CSV here instead of printing it.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the report as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Best constant of the Pitt inequality.
    Pitt {
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'p')]
        p: f64,
        /// Measured sup ‖Y_k‖_{p'}/‖Y_k‖_p; defaults to the asymptotic order k^{(d-2)(1/p-1/2)}.
        #[arg(long)]
        ratio: Option<f64>,
    },
}

/// Comma-separated coordinates.
#[derive(Debug, Clone)]
struct Point(Vec<f64>);

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    s.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("{c:?}: {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(Point)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Eval { spec, point } => {
            let z = evaluate(&spec, &point.0)?;
            writeln!(out, "{:.17e} {:.17e}", z.re, z.im)?;
        }
        Command::Norm { spec, p } => {
            let res = lp_norm(&spec, p.to_f64(), &NormBudget::default())?;
            match res.slack {
                Some(s) => writeln!(out, "{:.17e} method={} slack={s:.3e}", res.value, res.method)?,
                None => writeln!(out, "{:.17e} method={}", res.value, res.method)?,
            }
        }
        Command::Project { k, spec, points } => {
            let f = RealHarmonic::new(spec, Part::Re);
            let g = project(f.dims(), k, &f)?;
            print_applied(&mut out, &f, &g, points)?;
        }
        Command::Toperator { n, spec, points } => {
            let f = RealHarmonic::new(spec, Part::Re);
            let g = t_operator(f.dims(), n, &f)?;
            print_applied(&mut out, &f, &g, points)?;
        }
        Command::Regimes { d, csv } => {
            let table = RateTable::for_dimension(d)?;
            match csv {
                Some(path) => table.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))?,
                None => table.write_csv(&mut out)?,
            }
        }
        Command::Verify { suites, config, csv, json } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path)?,
                None => ExperimentConfig::default(),
            };
            if !suites.is_empty() {
                let mut chosen = Vec::new();
                for s in &suites {
                    if s == "all" {
                        chosen.extend(Suite::ALL);
                    } else {
                        chosen.push(s.parse::<Suite>()?);
                    }
                }
                cfg.suites = chosen;
            }
            if csv.is_some() {
                cfg.output.csv = csv;
            }
            if json.is_some() {
                cfg.output.json = json;
            }
            let to_stdout = cfg.output.csv.is_none() && cfg.output.json.is_none();
            let report = run_suite(&cfg)?;
            if to_stdout {
                report.write_csv(&mut out)?;
            }
            for row in report.rows.iter().filter(|r| r.status == Status::Fail) {
                eprintln!("FAIL {}/{}: {}", row.suite, row.key, row.detail);
            }
            eprintln!(
                "{} rows: {} pass, {} fail, {} refused, {} info",
                report.rows.len(),
                report.count(Status::Pass),
                report.count(Status::Fail),
                report.count(Status::Refused),
                report.count(Status::Info)
            );
            return Ok(exit_code(&report));
        }
        Command::Pitt { d, k, p, ratio } => {
            let source = match ratio {
                Some(v) => PittRatio::Empirical(v),
                None => PittRatio::Asymptotic,
            };
            let c = pitt_constant(d, k, p, source)?;
            let note = if c.order_only { " (ratio factor is order-only)" } else { "" };
            writeln!(out, "{:.17e} ratio={:.17e}{note}", c.value, c.ratio)?;
        }
    }
    Ok(0)
}

fn print_applied(
    out: &mut impl Write,
    f: &RealHarmonic,
    g: &AppliedOperator,
    points: Vec<Point>,
) -> Result<()> {
    let d = f.dims().d();
    let points: Vec<Vec<f64>> = if points.is_empty() {
        test_points(d, 5, 0)
    } else {
        points.into_iter().map(|p| p.0).collect()
    };
    for x in &points {
        if x.len() != d {
            return Err(Error::InvalidParameter(format!("point has {} coordinates, expected {d}", x.len())));
        }
    }
    let coords: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    writeln!(out, "{},input,output", coords.join(","))?;
    for (x, v) in points.iter().zip(g.eval_many(&points)) {
        let xs: Vec<String> = x.iter().map(|c| format!("{c:.17e}")).collect();
        writeln!(out, "{},{:.17e},{v:.17e}", xs.join(","), f.eval(x))?;
    }
    Ok(())
}
