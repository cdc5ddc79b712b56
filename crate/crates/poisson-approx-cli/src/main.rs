mod cli;
mod commands;
mod input;
mod render;
mod tables;

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use cli::{Cli, Command, ExampleCommand};
use render::Format;

/// Invalid arguments or input files.
const EXIT_INVALID: u8 = 2;
/// A bound's precondition fails for the given inputs.
const EXIT_INAPPLICABLE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<poisson_approx::Error>() {
                Some(poisson_approx::Error::Inapplicable(_)) => ExitCode::from(EXIT_INAPPLICABLE),
                _ => ExitCode::from(EXIT_INVALID),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let format = match (cli.json, cli.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => Format::Human,
    };
    let reports = match cli.command {
        Command::TvBounds { spec, schedule } => {
            commands::tv_bounds(&input::spec(&spec)?, &input::schedule(&schedule)?)?
        }
        Command::KlBounds { spec, schedule } => {
            commands::kl_bounds(&input::spec(&spec)?, &input::schedule(&schedule)?)?
        }
        Command::K1 {
            lambda,
            closed_form,
            schedule,
        } => commands::k1(lambda, closed_form, &input::schedule(&schedule)?)?,
        Command::EntropyBounds {
            model: Some(path), ..
        } => commands::entropy_bounds_model(&input::model(&path)?)?,
        Command::EntropyBounds { spec, model: None } => {
            commands::entropy_bounds_spec(&input::spec(&spec)?)?
        }
        Command::Example {
            which: ExampleCommand::RandomGraph { n, k },
        } => commands::example_random_graph(n, k)?,
        Command::Example {
            which: ExampleCommand::Gaussian { n, theta, t },
        } => commands::example_gaussian(n, theta, t)?,
        Command::Plan {
            mode,
            epsilon,
            d_lower: Some(d),
            ..
        } => commands::plan_direct(mode, d, epsilon)?,
        Command::Plan {
            mode,
            epsilon,
            d_lower: None,
            spec,
            schedule,
        } => commands::plan_spec(
            mode,
            epsilon,
            &input::spec(&spec)?,
            &input::schedule(&schedule)?,
        )?,
        Command::Tables { which, schedule } => {
            let table = tables::build(which, &input::schedule(&schedule)?)?;
            // Tables feed plotting scripts, so CSV is the default.
            let format = if format == Format::Human {
                Format::Csv
            } else {
                format
            };
            return emit(|out| render::table(out, &table, format));
        }
    };
    emit(|out| render::reports(out, &reports, format))
}

fn emit(write: impl FnOnce(&mut io::StdoutLock) -> Result<()>) -> Result<()> {
    let mut out = io::stdout().lock();
    let result = write(&mut out).and_then(|()| Ok(out.flush()?));
    match result {
        // A closed pipe (e.g. `| head`) is not a failure.
        Err(e) if is_broken_pipe(&e) => Ok(()),
        other => other,
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    let kind = |e: &(dyn std::error::Error + 'static)| {
        if let Some(io) = e.downcast_ref::<io::Error>() {
            return Some(io.kind());
        }
        if let Some(j) = e.downcast_ref::<serde_json::Error>() {
            return j.io_error_kind();
        }
        match e.downcast_ref::<csv::Error>().map(csv::Error::kind) {
            Some(csv::ErrorKind::Io(io)) => Some(io.kind()),
            _ => None,
        }
    };
    err.chain()
        .any(|e| kind(e) == Some(io::ErrorKind::BrokenPipe))
}
