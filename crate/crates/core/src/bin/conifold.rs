use std::process::ExitCode;

fn main() -> ExitCode {
    conifold::cli::run()
}
