use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = gqa::cli::run_args(std::env::args_os());
    if outcome.code == 2 {
        eprintln!("{}", outcome.text);
    } else {
        println!("{}", outcome.text);
    }
    ExitCode::from(outcome.code as u8)
}
