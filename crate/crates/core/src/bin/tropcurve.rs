use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out, err) = tropcurve::cli::run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    ExitCode::from(code as u8)
}
