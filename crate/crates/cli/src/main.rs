use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use svirlab_cli::commands::{failure_report, run};
use svirlab_cli::config::{Cli, Format, RunConfig};
use svirlab_cli::{CommandError, EXIT_CHECK_FAILURE, EXIT_PASS, EXIT_USAGE};

fn emit(text: &str, cfg: &RunConfig) -> Result<(), String> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let start = Instant::now();
    let (report, csv) = match run(&cfg) {
        Ok(out) => (out.report, out.csv),
        Err(CommandError::Usage(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
        Err(CommandError::Failed(msg)) => (failure_report(&cfg, &msg), None),
    };
    let timing = cfg.timing.then(|| BTreeMap::from([("totalSeconds".to_string(), start.elapsed().as_secs_f64())]));
    let text = match (cfg.format, csv) {
        (Format::Csv, Some(csv)) => csv,
        (Format::Csv, None) => {
            eprintln!("error: invalid --format: `{}` has no tabular output", cfg.command.name());
            return ExitCode::from(EXIT_USAGE as u8);
        }
        (Format::Json, _) => report.to_json(timing.as_ref()),
    };
    if let Err(e) = emit(&text, &cfg) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    if !report.passed() {
        for f in &report.failures {
            eprintln!("failed: {f}");
        }
    }
    ExitCode::from(if report.passed() { EXIT_PASS } else { EXIT_CHECK_FAILURE } as u8)
}
