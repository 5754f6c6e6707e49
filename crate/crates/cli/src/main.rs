use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (out, code) = stratum_cli::commands::run_command(&args);
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth reporting
    let _ = stdout.write_all(out.as_bytes());
    ExitCode::from(code as u8)
}
