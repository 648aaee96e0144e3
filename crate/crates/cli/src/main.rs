use std::process::ExitCode;

use clap::error::ErrorKind;

fn main() -> ExitCode {
    let config = match spinfoam_cli::parse_args(std::env::args_os()) {
        Ok(Ok(config)) => config,
        Ok(Err(e)) => return fail(&e.to_string()),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments");
            return fail(line.trim_start_matches("error: "));
        }
    };
    match spinfoam_cli::run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e.to_string()),
    }
}

fn fail(message: &str) -> ExitCode {
    eprintln!("spinfoam: error: {}", message.replace('\n', " "));
    ExitCode::from(2)
}
