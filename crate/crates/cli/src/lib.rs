//! Batch front end: JSON operator configs in, JSON reports and CSV out.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::path::{Path, PathBuf};

use cso_core::ErrorClass;
use thiserror::Error;

pub use args::Cli;
pub use config::{parse_config, ConfigError, OperatorConfig};
pub use report::RunReport;

use args::{Command, ConfigArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] cso_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.class() == ErrorClass::Convergence => EXIT_CONVERGENCE,
            _ => EXIT_PRECONDITION,
        }
    }
}

/// What a command produced: the report, plus CSV text for the figure.
#[derive(Debug)]
pub struct Output {
    pub report: RunReport,
    pub csv: Option<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load(args: &ConfigArgs) -> Result<(String, OperatorConfig, f64), CliError> {
    let text = read(&args.config)?;
    let config = parse_config(&text)?;
    let radius = args.radius.unwrap_or(config.radius);
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::Usage(format!("--radius must be finite and positive, got {radius}")));
    }
    Ok((text, config, radius))
}

/// Runs a parsed command line. `command` is the argument list echoed into
/// the report and digested together with the config text.
pub fn run(cli: &Cli, command: &[String]) -> Result<Output, CliError> {
    let (config_text, outputs, csv) = match &cli.command {
        Command::Diagnose(a) => {
            let (text, config, radius) = load(&a.config)?;
            (Some(text), commands::run_diagnose(&config, radius, a.pinned)?, None)
        }
        Command::Fixpoint(a) => {
            let (text, config, radius) = load(&a.config)?;
            (Some(text), commands::run_fixpoint(&config, radius, a)?, None)
        }
        Command::Golden(g) => {
            let (outputs, csv) = commands::run_golden(g)?;
            (None, outputs, csv)
        }
        Command::Polyfix(a) => {
            let (text, config, _) = load(&a.config)?;
            (Some(text), commands::run_polyfix(&config, a)?, None)
        }
    };
    let mut outputs = outputs;
    if let (Some(_), Some(path)) = (&csv, &cli.out) {
        outputs["csv_path"] = serde_json::json!(path.display().to_string());
    }
    let report = RunReport {
        command: command.to_vec(),
        inputs_digest: report::inputs_digest(command, config_text.as_deref()),
        outputs,
        wall_time_seconds: None,
    };
    Ok(Output { report, csv })
}

/// Writes an output to its destinations. With `--out`, the figure CSV goes
/// to the file and the report to stdout; other reports go to the file.
/// Without it, everything goes to stdout (the figure as CSV only).
pub fn emit(cli: &Cli, output: &Output, stdout: &mut impl std::io::Write) -> Result<(), CliError> {
    let write_file = |path: &Path, text: &str| {
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
    };
    let stdout_err = |source| CliError::Io { path: PathBuf::from("<stdout>"), source };
    match (&output.csv, &cli.out) {
        (Some(csv), Some(path)) => {
            write_file(path, csv)?;
            stdout.write_all(output.report.to_json().as_bytes()).map_err(stdout_err)
        }
        (Some(csv), None) => stdout.write_all(csv.as_bytes()).map_err(stdout_err),
        (None, Some(path)) => write_file(path, &output.report.to_json()),
        (None, None) => stdout.write_all(output.report.to_json().as_bytes()).map_err(stdout_err),
    }
}
