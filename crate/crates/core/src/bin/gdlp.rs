use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = gdlp::cli::run(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.output.as_bytes());
    ExitCode::from(out.status as u8)
}
