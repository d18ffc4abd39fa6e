use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use maxplus_lln_cli::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; exit code 2 means "no cycle time"
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => exit(Status::InputError),
            };
        }
    };
    let outcome =
        run(&cli).and_then(|o| o.emit(cli.format, cli.output.as_deref()).map(|()| o.status));
    match outcome {
        Ok(status) => exit(status),
        Err(e) => {
            eprintln!("error: {e:#}");
            exit(Status::InputError)
        }
    }
}

fn exit(status: Status) -> ExitCode {
    ExitCode::from(status.code() as u8)
}
