//! CLI front end: parses space/vector/operator JSON files, dispatches to
//! the library, and emits text or JSON reports.
//!
//! Exit codes: 0 success, 2 malformed input, 3 dimension mismatch,
//! 4 precondition violation, 5 theorem-suite inconsistency, 1 internal
//! failure.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use bjorth::report::{Diagnostics, Report, ReportResult};
use bjorth::{
    interval_equality_check, is_orthogonal, reconstruct_norm, theorem_suite, Error, ErrorClass,
    LinePencil, LinearOperator, NormSpec, SamplerConfig, Vector,
};

#[derive(Parser)]
#[command(
    name = "bjorth",
    version,
    about = "Birkhoff-James orthogonality structure in finite-dimensional normed spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether u is Birkhoff-James orthogonal to v.
    ///
    /// Input file: {"u": [...], "v": [...]}.
    CheckOrtho {
        #[command(flatten)]
        common: Common,
    },
    /// Locate the orthogonality segment [m, M] of the pencil x + alpha*y.
    ///
    /// Input file: {"x": [...], "y": [...]}.
    Interval {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the companion function f at alpha; inside [m, M] the
    /// status is orthogonal_to_y, at kinks not_differentiable.
    ///
    /// Input file: {"x": [...], "y": [...]}.
    Companion {
        #[command(flatten)]
        common: Common,
        /// Pencil parameter at which to evaluate.
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// Reconstruct the norm at alpha from the companion function and
    /// compare against direct evaluation.
    ///
    /// Input file: {"x": [...], "y": [...]}.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Pencil parameter at which to reconstruct.
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// Decide empirically whether an operator preserves orthogonality and
    /// whether it is a scaled isometry.
    ///
    /// Input file: {"matrix": [[...], ...]}.
    ClassifyOperator {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampler: SamplerArgs,
    },
    /// Classify the operator and additionally check that sampled pencils
    /// keep their orthogonality intervals under the operator's image.
    ///
    /// Input file: {"matrix": [[...], ...]}.
    TheoremSuite {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampler: SamplerArgs,
    },
    /// Run a list of jobs from a JSON file (array of job objects with
    /// fields command, space, input, and optional alpha/seed/pairs/
    /// output_format).
    Batch {
        /// Jobs JSON file.
        #[arg(long)]
        jobs: PathBuf,
        /// Default output format for jobs that do not set one.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Space description JSON file: {"dim": n, "norm": {"type": ...}}.
    #[arg(long)]
    space: PathBuf,
    /// Command payload JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SamplerArgs {
    /// Seed driving all sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled pairs per check.
    #[arg(long, default_value_t = 1000)]
    pairs: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput {
    u: Vector,
    v: Vector,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PencilInput {
    x: Vector,
    y: Vector,
}

/// One entry of a batch file. `input` mirrors the `--input` payload.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Job {
    command: String,
    space: NormSpec,
    #[serde(alias = "inputs")]
    input: serde_json::Value,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    pairs: Option<u32>,
    #[serde(default)]
    output_format: Option<Format>,
}

enum Failure {
    Lib(Error),
    Io { path: PathBuf, source: std::io::Error },
    Parse { context: String, source: serde_json::Error },
    Usage { reason: String },
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => lib_exit_code(e),
            Failure::Io { .. } | Failure::Parse { .. } | Failure::Usage { .. } => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io { path, source } => format!("cannot read {}: {source}", path.display()),
            Failure::Parse { context, source } => format!("malformed {context}: {source}"),
            Failure::Usage { reason } => reason.clone(),
        }
    }
}

fn lib_exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Malformed => 2,
        ErrorClass::DimensionMismatch => 3,
        ErrorClass::Precondition => 4,
        ErrorClass::Internal => 1,
    }
}

fn lib<T>(r: bjorth::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Lib)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_file(path)?).map_err(|source| Failure::Parse {
        context: path.display().to_string(),
        source,
    })
}

fn parse_payload<T: serde::de::DeserializeOwned>(payload: serde_json::Value) -> Result<T, Failure> {
    serde_json::from_value(payload).map_err(|source| Failure::Parse {
        context: "input payload".to_string(),
        source,
    })
}

/// Runs one job. Returns the report and the exit code (0 or 5).
fn execute(
    command: &str,
    space: NormSpec,
    payload: serde_json::Value,
    alpha: Option<f64>,
    seed: u64,
    pairs: u32,
) -> Result<(Report, u8), Failure> {
    let mut exit = 0u8;
    let mut diagnostics = Diagnostics::default();
    let require_alpha = || {
        alpha.ok_or(Failure::Usage {
            reason: format!("'{command}' requires --alpha"),
        })
    };
    let result = match command {
        "check-ortho" => {
            let input: PairInput = parse_payload(payload)?;
            let orthogonal = lib(is_orthogonal(&space, &input.u, &input.v))?;
            let support = lib(space.support_set(&input.u))?;
            let (left_derivative, right_derivative) = lib(support.pairing_range(&input.v))?;
            ReportResult::CheckOrtho {
                orthogonal,
                left_derivative,
                right_derivative,
            }
        }
        "interval" => {
            let input: PencilInput = parse_payload(payload)?;
            let pencil = lib(LinePencil::new(space.clone(), input.x, input.y))?;
            let interval = lib(pencil.interval())?;
            ReportResult::Interval {
                m: interval.lo,
                upper: interval.hi,
                min_value: interval.min_value,
            }
        }
        "companion" => {
            let a = require_alpha()?;
            diagnostics.alpha = Some(a);
            let input: PencilInput = parse_payload(payload)?;
            let pencil = lib(LinePencil::new(space.clone(), input.x, input.y))?;
            ReportResult::Companion(lib(pencil.companion_at(a))?)
        }
        "reconstruct" => {
            let a = require_alpha()?;
            diagnostics.alpha = Some(a);
            let input: PencilInput = parse_payload(payload)?;
            let pencil = lib(LinePencil::new(space.clone(), input.x, input.y))?;
            ReportResult::Reconstruct(lib(reconstruct_norm(&pencil, a))?)
        }
        "classify-operator" | "theorem-suite" => {
            let op: LinearOperator = parse_payload(payload)?;
            let cfg = SamplerConfig {
                seed,
                num_pairs: pairs,
                ..SamplerConfig::default()
            };
            diagnostics.seed = Some(seed);
            diagnostics.num_pairs = Some(pairs);
            let verdict = lib(theorem_suite(&space, &op, &cfg))?;
            if verdict.inconsistent {
                exit = 5;
            }
            if command == "classify-operator" {
                ReportResult::ClassifyOperator { verdict }
            } else {
                let interval_equality = if op.is_invertible() && !op.is_zero() {
                    Some(lib(interval_equality_check(&space, &op, &cfg))?)
                } else {
                    None
                };
                ReportResult::TheoremSuite {
                    verdict,
                    interval_equality,
                }
            }
        }
        other => {
            return Err(Failure::Usage {
                reason: format!("unknown command '{other}'"),
            })
        }
    };
    Ok((
        Report {
            command: command.to_string(),
            space,
            result,
            diagnostics,
        },
        exit,
    ))
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

/// Writes a report block to stdout. A reader that closes the pipe early
/// (`bjorth ... | head`) is a normal exit, not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    if writeln!(out, "{text}").and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn run_single(
    command: &str,
    common: &Common,
    alpha: Option<f64>,
    sampler: Option<&SamplerArgs>,
) -> Result<u8, Failure> {
    let space: NormSpec = parse_file(&common.space)?;
    let payload: serde_json::Value = parse_file(&common.input)?;
    let seed = sampler.map_or(0, |s| s.seed);
    let pairs = sampler.map_or(1000, |s| s.pairs);
    let (report, exit) = execute(command, space, payload, alpha, seed, pairs)?;
    emit(&render(&report, common.format));
    Ok(exit)
}

fn run_batch(jobs_path: &Path, default_format: Format) -> Result<u8, Failure> {
    let entries: Vec<serde_json::Value> = parse_file(jobs_path)?;
    let mut blocks = Vec::with_capacity(entries.len());
    let mut exit = 0u8;
    for (index, entry) in entries.into_iter().enumerate() {
        let label = entry
            .get("command")
            .and_then(|c| c.as_str())
            .unwrap_or("?")
            .to_string();
        let outcome = serde_json::from_value::<Job>(entry)
            .map_err(|source| Failure::Parse {
                context: format!("job {index}"),
                source,
            })
            .and_then(|job| {
                let format = job.output_format.unwrap_or(default_format);
                execute(
                    &job.command,
                    job.space,
                    job.input,
                    job.alpha,
                    job.seed.unwrap_or(0),
                    job.pairs.unwrap_or(1000),
                )
                .map(|(report, code)| (report, code, format))
            });
        match outcome {
            Ok((report, code, format)) => {
                if exit == 0 {
                    exit = code;
                }
                blocks.push(render(&report, format));
            }
            Err(failure) => {
                if exit == 0 {
                    exit = failure.exit_code();
                }
                let block = match default_format {
                    Format::Text => format!(
                        "command: {label}\nerror: {} (exit {})",
                        failure.message(),
                        failure.exit_code()
                    ),
                    Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                        "command": label,
                        "error": failure.message(),
                        "exit_code": failure.exit_code(),
                    }))
                    .expect("json literal serializes"),
                };
                blocks.push(block);
            }
        }
    }
    emit(&blocks.join("\n---\n"));
    Ok(exit)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::CheckOrtho { common } => run_single("check-ortho", common, None, None),
        Command::Interval { common } => run_single("interval", common, None, None),
        Command::Companion { common, alpha } => {
            run_single("companion", common, Some(*alpha), None)
        }
        Command::Reconstruct { common, alpha } => {
            run_single("reconstruct", common, Some(*alpha), None)
        }
        Command::ClassifyOperator { common, sampler } => {
            run_single("classify-operator", common, None, Some(sampler))
        }
        Command::TheoremSuite { common, sampler } => {
            run_single("theorem-suite", common, None, Some(sampler))
        }
        Command::Batch { jobs, format } => run_batch(jobs, *format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
