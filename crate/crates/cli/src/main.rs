use std::process::ExitCode;

fn main() -> ExitCode {
    mcres_cli::run()
}
