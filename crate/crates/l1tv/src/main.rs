use std::process::ExitCode;

fn main() -> ExitCode {
    l1tv::cli::run()
}
