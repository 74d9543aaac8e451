use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(monoflow::cli::main_entry())
}
