use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use speccomp::{emit, oracle, run_comparison, Cli, RunConfig};

const EXIT_CONFIG: u8 = 1;
const EXIT_ROW_FAILURE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    let run = match cli.merged().and_then(RunConfig::from_cli) {
        Ok(run) => run,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match execute(&run) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_ROW_FAILURE),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

/// Returns whether every row succeeded.
fn execute(run: &RunConfig) -> Result<bool> {
    let rows = run_comparison(run);
    for row in rows.iter().filter(|r| r.failed()) {
        eprintln!(
            "warning: level {} failed: {}",
            row.n,
            row.error.as_deref().unwrap_or("unknown error")
        );
    }

    let mut stdout = std::io::stdout().lock();
    let any_output = run.out_csv.is_some()
        || run.out_json.is_some()
        || run.out_svg.is_some()
        || run.out_dat.is_some();
    if let Some(path) = &run.out_csv {
        emit::write_csv(&rows, path)?;
    }
    if let Some(path) = &run.out_json {
        emit::write_json(run, &rows, path)?;
    }
    if let Some(path) = &run.out_svg {
        emit::write_svg(run, &rows, path)?;
    }
    if let Some(path) = &run.out_dat {
        emit::write_dat(&rows, path)?;
    }
    if !any_output {
        stdout
            .write_all(emit::render_csv(&rows)?.as_bytes())
            .context("writing table to stdout")?;
    }
    if run.oracle {
        if !any_output {
            writeln!(stdout)?;
        }
        let report = oracle::render_report(&oracle::oracle_rows(run), run.verbose);
        stdout
            .write_all(report.as_bytes())
            .context("writing oracle report to stdout")?;
    }
    Ok(rows.iter().all(|r| !r.failed()))
}
