use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(anyon_carnot::cli::run() as u8)
}
