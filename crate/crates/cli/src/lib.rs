//! Command-line front end and certificate format for `prime-avoid-core`.

pub mod args;
pub mod commands;
pub mod document;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
pub use crate::commands::{EXIT_CAPACITY, EXIT_CHECK_FAILED, EXIT_DATA, EXIT_EXHAUSTED, EXIT_NO_INPUT, EXIT_OK, EXIT_USAGE};
pub use crate::document::CertificateDocument;

pub const THREADS_ENV: &str = "PRIME_AVOID_THREADS";

/// Parses `PRIME_AVOID_THREADS`; `Ok(None)` when unset.
pub fn thread_count(value: Option<&str>) -> Result<Option<usize>, String> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be an integer >= 1, got {v:?}")),
        },
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match &cli.command {
        Command::Construct(a) => commands::cmd_construct(a, out, err),
        Command::Verify(a) => commands::cmd_verify(a, out, err),
        Command::BenchSieve(a) => commands::cmd_bench_sieve(a, out, err),
        Command::MatrixScan(a) => commands::cmd_matrix_scan(a, out, err),
    }
}
