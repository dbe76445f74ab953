use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let limit = std::env::var(gsokit::cli::LIMIT_VAR).ok();
    let out = gsokit::run(std::env::args_os(), limit.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
