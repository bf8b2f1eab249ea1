//! Command-line front end: configuration, subcommands and report encoding.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::io::Write;

use clap::Parser;

pub use commands::{execute, Command, Outcome};
pub use config::{Flags, Format, RunConfig, Tolerances};
pub use error::CliError;
pub use report::{Cell, Report, Table};

#[derive(Debug, Parser)]
#[command(name = "exzero", version, about = "Numerical companion for real zeros of quadratic L-functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Runs a parsed command line and returns the process exit code.
/// Reports go to `--out` or `stdout`; warnings and errors go to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match run_inner(cli, stdout, stderr) {
        Ok(passed) => i32::from(!passed),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn run_inner(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = RunConfig::from_flags(&cli.flags)?;
    let outcome = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?
            .install(|| execute(cli.command, &cfg))?,
        None => execute(cli.command, &cfg)?,
    };
    for w in &outcome.warnings {
        writeln!(stderr, "{w}")?;
    }
    match &cfg.out {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            outcome.report.write(cfg.format, &mut file)?;
            file.flush()?;
        }
        None => outcome.report.write(cfg.format, stdout)?,
    }
    if !outcome.passed {
        writeln!(stderr, "{}: verification failed", cli.command.name())?;
    }
    Ok(outcome.passed)
}
