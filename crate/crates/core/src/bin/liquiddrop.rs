use std::process::ExitCode;

fn main() -> ExitCode {
    liquiddrop::cli::run()
}
