//! `galderiv`: validate presentations, scan delta-derivations, check the
//! recurrence lemmas and classify transposed Poisson structures.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or sizing
//! error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use galderiv_core::algebra::validate_presentation;
use galderiv_core::rational::{self, Rational};
use galderiv_core::solver::{self, BlockSummary, Classification};
use galderiv_core::{catalog, oracle, poisson, AlgebraPresentation, GradingDegree};

#[derive(Parser)]
#[command(
    name = "galderiv",
    version,
    about = "Exact delta-derivations and transposed Poisson structures of graded Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check grading, skew-symmetry and Jacobi on a window (default window 4)
    Validate(CommonArgs),
    /// Scan homogeneous delta-derivations over all degrees |gamma| <= gamma-max (default window 16)
    Solve(CommonArgs),
    /// Check the standalone recurrence lemmas for |gamma| <= 3 (default window 12)
    Lemmas(CommonArgs),
    /// Classify transposed Poisson structures (default window 8)
    TpClassify(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Catalog key (pgca, witt, virasoro, heisenberg-virasoro, abelian) or path to a presentation JSON file
    #[arg(long, default_value = "pgca")]
    algebra: String,
    /// Exact rational delta, "p/q" or "p"
    #[arg(long, default_value = "1/2")]
    delta: String,
    /// Largest |gamma| scanned
    #[arg(long, default_value_t = 4)]
    gamma_max: i64,
    /// Index window N: basis elements with |m| <= N
    #[arg(long)]
    window: Option<i64>,
    /// Interior M used for classification, or "auto" for floor(window/2)
    #[arg(long, default_value = "auto")]
    interior: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Resolved command configuration.
struct RunConfig {
    algebra: String,
    delta: Rational,
    gamma_max: i64,
    window: i64,
    interior: i64,
    format: Format,
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn math(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

impl RunConfig {
    fn resolve(args: &CommonArgs, default_window: i64) -> Result<RunConfig, Failure> {
        let delta = rational::parse(&args.delta).map_err(|e| usage(format!("--delta: {e}")))?;
        let window = args.window.unwrap_or(default_window);
        if window < 0 {
            return Err(usage("--window must be nonnegative"));
        }
        if args.gamma_max < 0 {
            return Err(usage("--gamma-max must be nonnegative"));
        }
        let interior = match args.interior.as_str() {
            "auto" => window / 2,
            s => s.parse::<i64>().map_err(|_| {
                usage(format!(
                    "--interior: expected an integer or \"auto\", got {s:?}"
                ))
            })?,
        };
        if interior < 0 || interior > window {
            return Err(usage(format!(
                "--interior {interior} must lie in [0, {window}]"
            )));
        }
        Ok(RunConfig {
            algebra: args.algebra.clone(),
            delta,
            gamma_max: args.gamma_max,
            window,
            interior,
            format: args.format,
            output: args.output.clone(),
        })
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.output {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(path) => std::fs::write(path, text)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        }
    }
}

/// Catalog key or file. Files are validated unless `validated` is false.
fn resolve_algebra(reference: &str, validated: bool) -> Result<AlgebraPresentation, Failure> {
    if catalog::KEYS.contains(&reference) {
        return catalog::get(reference).map_err(|e| usage(e.to_string()));
    }
    let path = Path::new(reference);
    if !path.exists() {
        return Err(usage(
            catalog::CatalogError::NotFound {
                key: reference.to_string(),
                available: catalog::KEYS.iter().map(|k| k.to_string()).collect(),
            }
            .to_string()
                + " (and no such file)",
        ));
    }
    let loaded = if validated {
        catalog::load(path)
    } else {
        catalog::load_unvalidated(path)
    };
    loaded.map_err(|e| match e {
        catalog::CatalogError::Validation { .. } => math(e.to_string()),
        _ => usage(e.to_string()),
    })
}

/// Pretty JSON with sorted keys; parsing and re-emitting is byte-identical.
fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report serializes");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ValidateJson {
    algebra: String,
    window: i64,
    pass: bool,
    basis_size: usize,
    pairs_checked: usize,
    triples_checked: usize,
    failure: Option<String>,
}

fn cmd_validate(cfg: &RunConfig) -> Result<u8, Failure> {
    if cfg.window < 2 {
        return Err(usage(format!(
            "validate needs --window >= 2, got {}",
            cfg.window
        )));
    }
    let p = resolve_algebra(&cfg.algebra, false)?;
    let report = validate_presentation(&p, cfg.window);
    let failure = report.failure.as_ref().map(|f| f.describe(&p));
    let text = match cfg.format {
        Format::Json => canonical_json(&ValidateJson {
            algebra: p.name().to_string(),
            window: cfg.window,
            pass: report.passed(),
            basis_size: report.basis_size,
            pairs_checked: report.pairs_checked,
            triples_checked: report.triples_checked,
            failure: failure.clone(),
        }),
        Format::Text => {
            let mut s = format!(
                "{}: window {}, {} basis elements, {} pairs, {} triples checked\n",
                p.name(),
                cfg.window,
                report.basis_size,
                report.pairs_checked,
                report.triples_checked
            );
            match &failure {
                None => s.push_str("pass\n"),
                Some(f) => {
                    let _ = writeln!(s, "FAIL: {f}");
                }
            }
            s
        }
    };
    cfg.emit(&text)?;
    Ok(if report.passed() { 0 } else { 1 })
}

#[derive(Serialize)]
struct ReportJson {
    degree: GradingDegree,
    full_dim: usize,
    interior_dim: usize,
    classification: Classification,
    basis: Vec<Vec<BlockSummary>>,
}

#[derive(Serialize)]
struct SolveJson {
    algebra: String,
    #[serde(with = "rational::serde_str")]
    delta: Rational,
    window: i64,
    interior: i64,
    reports: Vec<ReportJson>,
    verdict: String,
}

fn cmd_solve(cfg: &RunConfig) -> Result<u8, Failure> {
    let required = solver::min_window(cfg.gamma_max);
    if cfg.window < required {
        return Err(usage(format!(
            "window {} too small for --gamma-max {}: need --window >= {required}",
            cfg.window, cfg.gamma_max
        )));
    }
    let p = resolve_algebra(&cfg.algebra, true)?;
    let scan = solver::scan(&p, &cfg.delta, cfg.gamma_max, cfg.window, cfg.interior)
        .map_err(|e| usage(e.to_string()))?;
    let text = match cfg.format {
        Format::Json => canonical_json(&SolveJson {
            algebra: p.name().to_string(),
            delta: cfg.delta.clone(),
            window: cfg.window,
            interior: cfg.interior,
            reports: scan
                .reports
                .iter()
                .map(|r| ReportJson {
                    degree: r.degree,
                    full_dim: r.full_dim,
                    interior_dim: r.interior_dim,
                    classification: r.classification,
                    basis: r.basis.clone(),
                })
                .collect(),
            verdict: scan.verdict().to_string(),
        }),
        Format::Text => {
            let mut s = format!(
                "algebra {}  delta {}  window {}  interior {}  |gamma| <= {}\n",
                p.name(),
                rational::format(&cfg.delta),
                cfg.window,
                cfg.interior,
                cfg.gamma_max
            );
            let _ = writeln!(
                s,
                "{:<12} {:>8} {:>12}  classification",
                "degree", "full_dim", "interior_dim"
            );
            for r in &scan.reports {
                let _ = writeln!(
                    s,
                    "{:<12} {:>8} {:>12}  {}",
                    r.degree.to_string(),
                    r.full_dim,
                    r.interior_dim,
                    r.classification
                );
            }
            let _ = writeln!(s, "verdict: {}", scan.verdict());
            s
        }
    };
    cfg.emit(&text)?;
    Ok(0)
}

fn cmd_lemmas(cfg: &RunConfig) -> Result<u8, Failure> {
    let report = oracle::check_lemma_conclusions(cfg.window).map_err(|e| {
        usage(format!(
            "lemmas needs --window >= {}: {e}",
            oracle::LEMMA_MIN_WINDOW
        ))
    })?;
    let text = match cfg.format {
        Format::Json => canonical_json(&report),
        Format::Text => {
            let mut s = format!("window {}\n", report.window);
            let _ = writeln!(
                s,
                "{:<18} {:>6} {:>9} {:>13} {:>10}  result",
                "recurrence", "gamma", "interior", "interior_dim", "expected"
            );
            for r in &report.results {
                let expected = match r.expected {
                    oracle::Expected::Constants => "constants",
                    oracle::Expected::Zero => "zero",
                };
                let _ = writeln!(
                    s,
                    "{:<18} {:>6} {:>9} {:>13} {:>10}  {}",
                    r.lemma,
                    r.gamma,
                    r.interior,
                    r.interior_dim,
                    expected,
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
            let _ = writeln!(
                s,
                "{}",
                if report.all_pass {
                    "all pass"
                } else {
                    "FAILURES"
                }
            );
            s
        }
    };
    cfg.emit(&text)?;
    Ok(if report.all_pass { 0 } else { 1 })
}

fn cmd_tp_classify(cfg: &RunConfig) -> Result<u8, Failure> {
    let p = resolve_algebra(&cfg.algebra, true)?;
    let report = poisson::classify_structures(&p, cfg.window, cfg.interior, cfg.gamma_max)
        .map_err(|e| usage(e.to_string()))?;
    let text = match cfg.format {
        Format::Json => canonical_json(&report),
        Format::Text => {
            let mut s = format!(
                "algebra {}  window {}  product window |m| <= {}  |gamma| <= {}\n",
                report.algebra, report.window, report.interior, report.gamma_max
            );
            let _ = writeln!(
                s,
                "1/2-derivation operators on the product window: {}",
                report.operators
            );
            if report.solution_dim == 0 {
                let _ = writeln!(s, "{}", report.classification);
            } else {
                let _ = writeln!(
                    s,
                    "{} (solution dimension {})",
                    report.classification, report.solution_dim
                );
            }
            s
        }
    };
    cfg.emit(&text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate(a) => RunConfig::resolve(a, 4).and_then(|c| cmd_validate(&c)),
        Command::Solve(a) => RunConfig::resolve(a, 16).and_then(|c| cmd_solve(&c)),
        Command::Lemmas(a) => RunConfig::resolve(a, 12).and_then(|c| cmd_lemmas(&c)),
        Command::TpClassify(a) => RunConfig::resolve(a, 8).and_then(|c| cmd_tp_classify(&c)),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
