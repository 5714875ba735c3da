use std::process::ExitCode;

use clap::Parser;
use vod_cli::commands::{run, Cli};
use vod_cli::CliError;

/// Sizes the global rayon pool from `VOD_THREADS` (unset or 0 = automatic).
fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("VOD_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Invalid(format!("VOD_THREADS must be a count, got {raw:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
