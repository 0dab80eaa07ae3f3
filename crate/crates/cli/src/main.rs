use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(frw_cli::run(std::env::args_os()))
}
