//! Orchestration behind the `qwalk` binary: argument and config parsing,
//! command dispatch, and deterministic CSV/JSON output.

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use config::{Config, ConfigError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_LATTICE: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;
pub const EXIT_NUMERIC: u8 = 5;

/// Seed used when neither `--seed` nor a `seed` key is given.
pub const DEFAULT_SEED: u64 = 20_050_601;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Discrete quantum walk of a trapped condensate")]
pub struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a config entry, e.g. `--set steps=10`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory; results go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walk distribution and moments after `steps` steps.
    Walk,
    /// Variance against step count with fitted log-log exponents.
    VarianceScan,
    /// Pulse dynamics.
    #[command(subcommand)]
    Pulse(PulseCommand),
    /// Feasibility of a walk in a given trap and timing budget.
    Plan,
    /// Calibrate, simulate, gate, sample.
    Experiment,
}

#[derive(Debug, Subcommand)]
pub enum PulseCommand {
    /// Two-level populations across an rf pulse.
    Rf,
    /// Raman kick calibration and kinematics.
    Raman,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocKind {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub file_name: String,
    pub kind: DocKind,
    pub text: String,
}

impl Document {
    pub fn csv(file_name: &str, text: String) -> Self {
        Self { file_name: file_name.into(), kind: DocKind::Csv, text }
    }

    pub fn json(file_name: &str, value: &serde_json::Value) -> Self {
        Self { file_name: file_name.into(), kind: DocKind::Json, text: output::json(value) }
    }
}

/// Documents to emit and the exit status to finish with. A nonzero status
/// here still emits the documents (a report explaining the failure).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub documents: Vec<Document>,
    pub exit: u8,
    pub message: Option<String>,
}

impl Outcome {
    pub fn ok(documents: Vec<Document>) -> Self {
        Self { documents, exit: EXIT_OK, message: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self { exit: EXIT_PARSE, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self::parse(e.0)
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &qwalk_core::Error) -> u8 {
    use qwalk_core::Error as E;
    match e {
        E::LatticeOverflow { .. } | E::InsufficientLattice { .. } => EXIT_LATTICE,
        E::NumericDrift { .. } | E::NotNormalized { .. } | E::NonHermitian { .. } | E::ZeroNorm => EXIT_NUMERIC,
        E::KickAtBoundary(_) => EXIT_NUMERIC,
        E::NonUnitaryCoin { .. }
        | E::InvalidParameter { .. }
        | E::InvalidDistribution(_)
        | E::LatticeMismatch(_)
        | E::DegenerateFit => EXIT_PARSE,
    }
}

impl From<qwalk_core::Error> for CliError {
    fn from(e: qwalk_core::Error) -> Self {
        Self { exit: exit_code(&e), message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn load_config(path: Option<&Path>, overrides: &[String]) -> CliResult<Config> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError { exit: EXIT_IO, message: format!("{}: {e}", p.display()) })?;
            Config::parse(&text, &p.display().to_string())?
        }
        None => Config::default(),
    };
    for s in overrides {
        cfg.set(s)?;
    }
    Ok(cfg)
}

/// Runs one command against a parsed config.
pub fn execute(command: &Command, cfg: &Config, seed: Option<u64>) -> CliResult<Outcome> {
    let outcome = match command {
        Command::Walk => commands::walk::run(cfg, seed)?,
        Command::VarianceScan => commands::scan::run(cfg)?,
        Command::Pulse(PulseCommand::Rf) => commands::pulse::rf(cfg)?,
        Command::Pulse(PulseCommand::Raman) => commands::pulse::raman(cfg)?,
        Command::Plan => commands::plan::run(cfg)?,
        Command::Experiment => commands::experiment::run(cfg, seed)?,
    };
    Ok(outcome)
}

fn selected(docs: &[Document], format: Format) -> Vec<&Document> {
    let has_csv = docs.iter().any(|d| d.kind == DocKind::Csv);
    docs.iter()
        .filter(|d| match (format, d.kind) {
            (Format::Both, _) | (Format::Csv, DocKind::Csv) | (Format::Json, DocKind::Json) => true,
            // Report-only commands have nothing else to show.
            (Format::Csv, DocKind::Json) => !has_csv,
            (Format::Json, DocKind::Csv) => false,
        })
        .collect()
}

/// Writes the documents into `out` (created if needed) or concatenates them
/// on stdout separated by blank lines.
pub fn emit(docs: &[Document], format: Format, out: Option<&Path>) -> CliResult<()> {
    use std::io::Write;
    let docs = selected(docs, format);
    let io = |e: std::io::Error| CliError { exit: EXIT_IO, message: e.to_string() };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            for d in docs {
                std::fs::write(dir.join(&d.file_name), &d.text).map_err(io)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (i, d) in docs.iter().enumerate() {
                if i > 0 {
                    stdout.write_all(b"\n").map_err(io)?;
                }
                stdout.write_all(d.text.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Full command-line run; returns the process exit status.
pub fn run(cli: &Cli) -> u8 {
    let result = load_config(cli.config.as_deref(), &cli.set)
        .and_then(|cfg| execute(&cli.command, &cfg, cli.seed))
        .and_then(|outcome| {
            emit(&outcome.documents, cli.format, cli.out.as_deref())?;
            Ok(outcome)
        });
    match result {
        Ok(outcome) => {
            if let Some(m) = outcome.message {
                eprintln!("qwalk: {m}");
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("qwalk: {e}");
            e.exit
        }
    }
}
