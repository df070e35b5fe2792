use std::process::ExitCode;

fn main() -> ExitCode {
    gravscatter::cli::main_with_args(std::env::args_os())
}
