use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use cl33::euclid::{embed_covector, embed_vector, normalize_point};
use cl33::pipeline::{
    check_pipeline, check_pipeline_perturbed, format_matrix, format_points, parse_pipeline, parse_points, ParseError,
    ParseErrorKind, Pipeline,
};
use cl33::projective::projective_matrix_probe;
use cl33::selftest::{run_all, SelftestConfig};
use cl33::{Error, EuclidVector, NormalizedPoint, Paravector};

const EXIT_PARSE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_RESIDUE: u8 = 4;
const EXIT_CONDITION: u8 = 5;

#[derive(Parser)]
#[command(name = "cl33", version, about = "Apply Cl(3,3) point transformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a pipeline to a point file and print the images.
    Apply {
        #[arg(long)]
        pipeline: PathBuf,
        #[arg(long)]
        points: PathBuf,
        /// Divide each image by its weight.
        #[arg(long, conflicts_with = "keep_weights")]
        normalize: bool,
        /// Print raw weighted images (the default).
        #[arg(long)]
        keep_weights: bool,
    },
    /// Print the 4x4 matrix of a pipeline acting on (w, x, y, z).
    Matrix {
        #[arg(long)]
        pipeline: PathBuf,
    },
    /// Evaluate the paravector-preservation conditions of every stage.
    Check {
        #[arg(long)]
        pipeline: PathBuf,
        /// Add `eps e1^e2^e3*` to every sandwich stage (test hook).
        #[arg(long, hide = true, value_name = "EPS")]
        inject: Option<f64>,
    },
    /// Run every property suite.
    Selftest {
        #[arg(long, default_value_t = SelftestConfig::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = SelftestConfig::default().seed)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Degenerate(_) => EXIT_DEGENERATE,
        Error::NonParavectorResidue { .. }
        | Error::CovectorResidue { .. }
        | Error::HodgeDomain { .. }
        | Error::NotLinear { .. }
        | Error::NotHodgeCompatible { .. } => EXIT_RESIDUE,
        _ => EXIT_PARSE,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(error_code(&e), e.to_string())
    }
}

fn parse_failure(path: &Path, e: ParseError) -> Failure {
    let code = match &e.kind {
        ParseErrorKind::Syntax(_) => EXIT_PARSE,
        ParseErrorKind::Semantic(inner) => match error_code(inner) {
            EXIT_DEGENERATE => EXIT_DEGENERATE,
            _ => EXIT_PARSE,
        },
    };
    Failure::new(code, format!("{}:{e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_pipeline(path: &Path) -> Result<Pipeline, Failure> {
    parse_pipeline(&read(path)?).map_err(|e| parse_failure(path, e))
}

fn apply(pipeline: &Path, points: &Path, normalize: bool) -> Result<String, Failure> {
    let t = load_pipeline(pipeline)?.transform()?;
    let input = parse_points(&read(points)?).map_err(|e| parse_failure(points, e))?;
    let images = input.iter().map(|p| t.apply(p)).collect::<Result<Vec<_>, _>>()?;
    if !normalize {
        return Ok(format_points(&images));
    }
    let normalized: Vec<Paravector> = images
        .iter()
        .map(|p| match normalize_point(p) {
            NormalizedPoint::Finite(q) => q,
            NormalizedPoint::AtInfinity(v) => Paravector::new(0.0, v),
        })
        .collect();
    Ok(format_points(&normalized))
}

fn matrix(pipeline: &Path) -> Result<String, Failure> {
    let t = load_pipeline(pipeline)?.transform()?;
    Ok(format_matrix(&projective_matrix_probe(&t)?))
}

fn check(pipeline: &Path, inject: Option<f64>) -> Result<String, Failure> {
    let pipeline = load_pipeline(pipeline)?;
    let reports = match inject {
        None => check_pipeline(&pipeline)?,
        Some(eps) => {
            let e = |i| embed_vector(&EuclidVector::axis(i));
            let psi3 = e(1)
                .outer_product(&e(2))
                .outer_product(&embed_covector(&EuclidVector::axis(3)));
            check_pipeline_perturbed(&pipeline, &(psi3 * eps))?
        }
    };
    let mut out = String::new();
    let mut ok = true;
    for report in &reports {
        for (name, r) in &report.entries {
            let verdict = if *r <= report.tolerance { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{verdict} {} {name} {r:.3e} (tol {:.1e})",
                report.label, report.tolerance
            )
            .unwrap();
        }
        ok &= report.passed();
    }
    if reports.is_empty() {
        out.push_str("PASS identity\n");
    }
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::new(EXIT_CONDITION, "preservation conditions failed"))
    }
}

fn selftest(samples: usize, seed: u64) -> Result<String, Failure> {
    let cfg = SelftestConfig {
        samples,
        seed,
        ..SelftestConfig::default()
    };
    let start = Instant::now();
    let results = run_all(&cfg);
    let mut out = String::new();
    for r in &results {
        writeln!(out, "{r}").unwrap();
        if let Some(first) = &r.first_failure {
            writeln!(out, "     first failure: {first}").unwrap();
        }
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    writeln!(
        out,
        "{passed}/{} suites passed in {:.2?}",
        results.len(),
        start.elapsed()
    )
    .unwrap();
    if passed == results.len() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::new(EXIT_CONDITION, "selftest failed"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Apply {
            pipeline,
            points,
            normalize,
            ..
        } => apply(pipeline, points, *normalize),
        Command::Matrix { pipeline } => matrix(pipeline),
        Command::Check { pipeline, inject } => check(pipeline, *inject),
        Command::Selftest { samples, seed } => selftest(*samples, *seed),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("cl33: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
