use std::process::ExitCode;

use casimir_cli::{parse_and_validate, run, CliError};

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("CASIMIR_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("CASIMIR_THREADS={value:?} is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::usage(format!("CASIMIR_THREADS: {e}")))
}

fn main() -> ExitCode {
    let result =
        configure_threads().and_then(|_| parse_and_validate(std::env::args_os())).and_then(|config| run(&config));
    match result {
        Ok(rendered) => {
            for note in &rendered.notes {
                eprintln!("{note}");
            }
            ExitCode::from(rendered.exit_code() as u8)
        }
        Err(CliError::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
