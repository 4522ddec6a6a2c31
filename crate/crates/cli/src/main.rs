use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cmrank_cli::args::{Cli, Command};
use cmrank_cli::commands;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { cmrank_cli::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let result = match &cli.command {
        Command::Classify(a) => commands::cmd_classify(a),
        Command::Iso(a) => commands::cmd_iso(a),
        Command::Enumerate(a) => commands::cmd_enumerate(a),
        Command::Count(a) => commands::cmd_count(a),
        Command::Oracle(a) => commands::cmd_oracle(a),
        Command::PaperSuite(a) => commands::cmd_paper_suite(a),
    };
    match result {
        Ok((text, code)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
