use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gmorita_core::groups::load_group;
use gmorita_core::{GroupSpec, PrimeField};

mod checks;
mod scenario;

use checks::CheckReport;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable input, malformed JSON, unresolved names. Exit code 2.
    Parse(String),
    /// A hypothesis or invariant fails. Exit code 1.
    Validation(String),
    /// Data that should be consistent by construction is not. Exit code 3.
    Inconsistent(String),
}

impl From<gmorita_core::Error> for CliError {
    fn from(e: gmorita_core::Error) -> Self {
        match e {
            gmorita_core::Error::Inconsistent(_) => CliError::Inconsistent(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 1,
            CliError::Inconsistent(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Inconsistent(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "gmorita", version, about = "Blocks, Morita contexts and graded Morita equivalences over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block decomposition of a group algebra.
    Blocks {
        group: PathBuf,
        #[arg(long)]
        p: u64,
        /// Cross-check against exhaustive enumeration of the center.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a check (or the scenario's pipeline) on a scenario file.
    Verify {
        scenario: PathBuf,
        #[arg(long)]
        check: Option<Check>,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Check {
    Morita,
    GradedMorita,
    Diagram,
    CentralizerLayer,
    Butterfly,
}

impl Check {
    fn parse_name(name: &str) -> Result<Self, CliError> {
        <Check as ValueEnum>::from_str(name, false).map_err(|_| CliError::Parse(format!("unknown check {name}")))
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    status: &'static str,
    results: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Parse(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_check(check: Check, r: &scenario::Resolved, seed: u64, oracle: bool) -> Result<CheckReport, CliError> {
    match check {
        Check::Morita => checks::morita(r, oracle),
        Check::GradedMorita => checks::graded_morita(r, seed),
        Check::Diagram => checks::diagram(r, seed, oracle),
        Check::CentralizerLayer => checks::centralizer_layer(r, seed),
        Check::Butterfly => checks::butterfly(r, seed),
    }
}

fn blocks(group: &Path, p: u64, oracle: bool, out: Option<&Path>) -> Result<bool, CliError> {
    let spec: GroupSpec = serde_json::from_str(&read(group)?).map_err(|e| CliError::Parse(format!("group: {e}")))?;
    let g = load_group(&spec).map_err(|e| CliError::Parse(e.to_string()))?;
    let field = PrimeField::new(p).map_err(|e| CliError::Parse(e.to_string()))?;
    let result = checks::blocks(&g, field, oracle);
    let passed = result.passed();
    let report = Report { command: "blocks", seed: None, status: if passed { "pass" } else { "fail" }, results: vec![result], error: None };
    emit(&report, out)?;
    Ok(passed)
}

fn verify(path: &Path, check: Option<Check>, oracle: bool, out: Option<&Path>, seed: u64) -> Result<bool, CliError> {
    let file = scenario::parse(&read(path)?)?;
    let checks = match check {
        Some(c) => vec![c],
        None => file.pipeline.iter().map(|n| Check::parse_name(n)).collect::<Result<Vec<_>, _>>()?,
    };
    if checks.is_empty() {
        emit(&Report { command: "verify", seed: Some(seed), status: "pass", results: Vec::new(), error: None }, out)?;
        return Ok(true);
    }
    let resolved = file.resolve();
    let mut results = Vec::new();
    let mut failure = None;
    match resolved {
        Ok(r) => {
            for c in checks {
                match run_check(c, &r, seed, oracle) {
                    Ok(rep) => results.push(rep),
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
        }
        Err(e) => failure = Some(e),
    }
    if let Some(CliError::Parse(_)) = failure {
        return Err(failure.unwrap());
    }
    let passed = failure.is_none() && results.iter().all(CheckReport::passed);
    let report = Report {
        command: "verify",
        seed: Some(seed),
        status: if passed { "pass" } else { "fail" },
        results,
        error: failure.as_ref().map(|e| e.message().to_string()),
    };
    emit(&report, out)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(passed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Blocks { group, p, oracle, out } => blocks(group, *p, *oracle, out.as_deref()),
        Command::Verify { scenario, check, oracle, out, seed } => verify(scenario, *check, *oracle, out.as_deref(), *seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gmorita: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
