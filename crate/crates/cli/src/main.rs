mod commands;
mod config;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::Cli;
use error::CliError;

/// Caps the rayon pool at `BSGRAPH_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BSGRAPH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("BSGRAPH_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))
}

fn write_body(out: Option<&std::path::Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e)),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let options = cli.resolved_options()?;
    let outcome = commands::run(cli.command, &options)?;
    write_body(outcome.out.as_deref(), &outcome.body)?;
    if let Some(summary) = outcome.summary {
        eprintln!("{summary}");
    }
    outcome.deferred.map_or(Ok(()), Err)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(&CliError::Usage(first.to_string()));
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
