use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(sparseprep_cli::run())
}
