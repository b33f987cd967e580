use std::process::ExitCode;

fn main() -> ExitCode {
    hstar::cli::main_with_args(std::env::args_os())
}
