use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = chipfire_cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(result.report.as_bytes());
    let _ = out.flush();
    ExitCode::from(result.exit_code as u8)
}
