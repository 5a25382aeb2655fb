use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = revkit_cli::run(std::env::args_os());
    let written = if report.is_error {
        std::io::stderr().write_all(report.body.as_bytes())
    } else {
        std::io::stdout().write_all(report.body.as_bytes())
    };
    match written {
        Ok(()) => ExitCode::from(report.exit_code as u8),
        Err(_) => ExitCode::from(revkit_cli::EXIT_USAGE as u8),
    }
}
