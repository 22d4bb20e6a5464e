use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = mcturing_cli::dispatch(std::env::args(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
