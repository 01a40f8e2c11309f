use std::io;
use std::process::ExitCode;

use prime_avoid::{run, thread_count, EXIT_USAGE, THREADS_ENV};

fn main() -> ExitCode {
    let mut err = io::stderr().lock();
    match thread_count(std::env::var(THREADS_ENV).ok().as_deref()) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: cannot configure thread pool: {e}");
            }
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let mut out = io::stdout().lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    ExitCode::from(code as u8)
}
