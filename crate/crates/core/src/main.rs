use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(eulerian_lab::cli::run())
}
