//! `seqtag` command-line driver.

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

mod cli;
mod commands;
mod error;
mod io;
mod manifest;

use cli::{Cli, Command};
use error::{CliError, CliResult};

/// Parses `argv` and runs the selected command. `rerun` calls back into this
/// with the argument vector stored in a manifest.
pub fn run(argv: Vec<String>) -> CliResult<()> {
    let cli = match Cli::try_parse_from(argv.iter().map(OsString::from)) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Ok(());
        }
        Err(e) => {
            let text = e.render().to_string();
            let text = text.trim_end();
            return Err(CliError::usage(text.strip_prefix("error: ").unwrap_or(text)));
        }
    };
    match cli.command {
        Command::TrainEmbeddings(args) => commands::embeddings::run(&argv, args),
        Command::Split(args) => commands::split::run(&argv, args),
        Command::TrainNer(args) => commands::ner::run(&argv, args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::Predict(args) => commands::predict::run(&argv, args),
        Command::Rerun(args) => commands::rerun::run(args),
        Command::GenerateSynthetic(args) => commands::synthetic::run(&argv, args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
