//! `kneser`: command-line front end for the verification pipelines.

mod commands;
mod parse;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use kneser_core::Error;
use serde::Serialize;

use commands::Outcome;

/// Version of the JSON report envelope.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "kneser", version, about = "Density and product-set verification at finite scale")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = kneser_core::finitegrp::DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write density series as CSV here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Single-line JSON.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: commands::Command,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a str,
    seed: u64,
    pass: bool,
    report: serde_json::Value,
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Resource(_) => 3,
        _ => 2,
    }
}

fn emit(cli: &Cli, name: &str, outcome: Outcome) -> Result<(), (u8, String)> {
    let env = Envelope { schema_version: SCHEMA_VERSION, command: name, seed: cli.seed, pass: outcome.pass, report: outcome.report };
    let text = if cli.compact { serde_json::to_string(&env) } else { serde_json::to_string_pretty(&env) }
        .map_err(|e| (3, format!("cannot serialize report: {e}")))?;
    match &cli.out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| (3, format!("cannot write {}: {e}", p.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}").and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err((3, format!("cannot write report: {e}"))),
                _ => {}
            }
        }
    }
    if let Some(p) = &cli.csv {
        let csv = outcome.csv.unwrap_or_default();
        fs::write(p, csv).map_err(|e| (3, format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot start {t} worker threads: {e}");
            return ExitCode::from(3);
        }
    }
    let name = cli.command.name();
    let outcome = match commands::run(&cli.command, cli.seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_for(&e));
        }
    };
    let pass = outcome.pass;
    if let Err((code, msg)) = emit(&cli, name, outcome) {
        eprintln!("error: {msg}");
        return ExitCode::from(code);
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn resource_errors_exit_3() {
        assert_eq!(exit_for(&Error::Resource("x".into())), 3);
        assert_eq!(exit_for(&Error::Parse("x".into())), 2);
        assert_eq!(exit_for(&Error::Precondition("x".into())), 2);
    }
}
