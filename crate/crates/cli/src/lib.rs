//! Batch frontend over `wonderful-core`: one subcommand per suite, with
//! deterministic reports and CI-friendly exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | every check passed |
//! | 1 | some check failed |
//! | 2 | invalid configuration or input |
//! | 3 | a computation hit its budget |

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

use std::time::Instant;

use thiserror::Error;

pub use config::{Cli, Command, Format, RunConfig};
pub use report::{Record, Report, Status};
pub use suites::run_verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Core(#[from] wonderful::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget(_) => 3,
            CliError::Core(e) if e.is_budget() => 3,
            _ => 2,
        }
    }
}

macro_rules! core_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        })*
    };
}

core_from!(
    wonderful::GfError,
    wonderful::ProjError,
    wonderful::ChowError,
    wonderful::FanError,
    wonderful::AutError
);

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    /// Deterministic part.
    pub body: String,
    /// Wall-time line, present for reports.
    pub footer: Option<String>,
    pub pass: bool,
    pub budget_exhausted: bool,
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        if !self.pass {
            1
        } else if self.budget_exhausted {
            3
        } else {
            0
        }
    }

    pub fn text(&self) -> String {
        let mut s = self.body.clone();
        if let Some(f) = &self.footer {
            s.push_str(f);
        }
        s
    }
}

/// Runs one subcommand. `stdin` is consulted only by `aut realize`.
pub fn run(config: &RunConfig, stdin: &str) -> Result<Output, CliError> {
    config.validate()?;
    let start = Instant::now();
    match &config.command {
        Command::Verify { .. } => {
            let report = run_verify(config)?;
            let elapsed = start.elapsed().as_millis();
            Ok(Output {
                body: report.render(config.format),
                footer: Some(report::footer(config.format, elapsed)),
                pass: report.pass,
                budget_exhausted: report.budget_exhausted,
            })
        }
        _ => commands::run_command(config, stdin),
    }
}
