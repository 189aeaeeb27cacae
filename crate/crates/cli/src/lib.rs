//! Command-line driver for the grid game: simulation, load reports, best responses,
//! game solving and parameter sweeps, emitted as flat CSV or JSON-lines rows.

pub mod args;
pub mod commands;
pub mod config;
pub mod record;

use std::io::Write;

use clap::Parser;

pub use args::Cli;
pub use config::{ExperimentConfig, GridSource};
pub use record::{decode, encode, OutputFormat, ResultRecord, HEADER};

use args::Command;
use config::ExtraFlags;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] gridgame::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// 2 for usage and input errors, 3 when an exact oracle exceeds its enumeration
    /// limit, 1 for output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_capacity() => 3,
            CliError::Usage(_) | CliError::Model(_) => 2,
            CliError::Output(_) => 1,
        }
    }
}

/// Output of one invocation and where it should go.
pub struct Output {
    pub bytes: Vec<u8>,
    pub path: Option<std::path::PathBuf>,
}

impl Output {
    pub fn write(&self) -> Result<(), CliError> {
        let result = match &self.path {
            Some(path) => std::fs::write(path, &self.bytes),
            None => std::io::stdout().lock().write_all(&self.bytes),
        };
        result.map_err(|e| CliError::Output(e.to_string()))
    }
}

/// Runs a parsed command line and returns its encoded output.
pub fn run(cli: Cli) -> Result<Output, CliError> {
    type Handler = fn(&ExperimentConfig) -> Result<Vec<ResultRecord>, CliError>;
    let (config, command): (ExperimentConfig, Handler) = match cli.command {
        Command::Gen(a) => {
            return Ok(Output {
                bytes: commands::generate(&a.synthetic, a.seed)?.into_bytes(),
                path: a.out,
            })
        }
        Command::Simulate(a) => {
            let extra = ExtraFlags {
                attack: a.attack,
                defend: a.defend,
                ..Default::default()
            };
            (ExperimentConfig::resolve(&a.common, extra)?, commands::simulate)
        }
        Command::Loads(a) => (ExperimentConfig::resolve(&a, ExtraFlags::default())?, commands::loads),
        Command::Respond(a) => {
            let extra = ExtraFlags {
                attack: a.attack,
                defend: a.defend,
                side: a.side,
                ..Default::default()
            };
            (ExperimentConfig::resolve(&a.common, extra)?, commands::respond)
        }
        Command::Solve(a) => (ExperimentConfig::resolve(&a, ExtraFlags::default())?, commands::solve),
        Command::Sweep(a) => {
            let extra = ExtraFlags {
                alphas: a.alphas,
                budgets: a.budgets,
                budget_mode: a.budget_mode,
                ..Default::default()
            };
            (ExperimentConfig::resolve(&a.common, extra)?, commands::sweep)
        }
    };
    let rows = command(&config)?;
    Ok(Output {
        bytes: encode(&rows, config.format)?,
        path: config.out,
    })
}

/// Parses `args` (including the program name) and runs them.
pub fn run_args<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(cli)
}
