use std::process::ExitCode;

fn main() -> ExitCode {
    mpp::cli::run(std::env::args_os())
}
