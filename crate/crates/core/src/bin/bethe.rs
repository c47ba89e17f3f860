use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(bethe_core::cli::run(std::env::args_os()))
}
