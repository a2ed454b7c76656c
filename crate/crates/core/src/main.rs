use std::process::ExitCode;

fn main() -> ExitCode {
    spectra_eval::cli::run(std::env::args_os())
}
