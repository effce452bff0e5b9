use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use contfrac_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(partial) = &e.partial {
                print!("{partial}");
            }
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
