//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid flags or config, 3 step-size failure
//! after one automatic halving retry, 4 oracle tolerance failure.

mod args;
mod manifest;
mod oracle_cmd;
mod outputs;
mod sweep;

use std::process::ExitCode;

use clap::Parser;
use superfluence::driver::{run_simulation, RunOptions, SimulationRun};
use superfluence::EngineError;

use args::{Cli, Command, OracleArgs, ResolvedPoint, RunArgs};
use manifest::{ManifestParameters, RunManifest};

const EXIT_BAD_ARGS: u8 = 2;
const EXIT_STEP_TOO_LARGE: u8 = 3;
const EXIT_ORACLE_FAIL: u8 = 4;

/// Worker-pool cap; unset or 0 means one worker per core.
const THREADS_ENV: &str = "SUPERFLUENCE_THREADS";

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var(THREADS_ENV) {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer");
                return ExitCode::from(EXIT_BAD_ARGS);
            }
        }
    }

    let cli = Cli::parse();
    match cli.command {
        Command::Run(run_args) => cmd_run(&run_args),
        Command::Sweep(sweep_args) => match sweep_args.point.resolve() {
            Ok(point) => match sweep::run_sweep(&sweep_args, &point) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => report_engine_error(e),
            },
            Err(e) => bad_args(e),
        },
        Command::Oracle(oracle_args) => cmd_oracle(&oracle_args),
    }
}

fn bad_args(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_BAD_ARGS)
}

fn report_engine_error(e: EngineError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        EngineError::StepTooLarge { .. } => ExitCode::from(EXIT_STEP_TOO_LARGE),
        _ => ExitCode::from(EXIT_BAD_ARGS),
    }
}

/// Run one point, halving `dt` once if the integrator flags the step size.
fn simulate_with_retry(point: &ResolvedPoint) -> superfluence::Result<SimulationRun> {
    let cfg = point.system_config()?;
    let pulse = point.pulse()?;
    let options =
        RunOptions { dt: point.dt, t_end: point.t_end, quadratures: point.quadratures };
    match run_simulation(&cfg, &pulse, &options) {
        Err(EngineError::StepTooLarge { .. }) => {
            let halved = RunOptions {
                dt: Some(point.dt.unwrap_or_else(|| {
                    superfluence::dicke::Grid::max_dt(&pulse, &cfg)
                }) / 2.0),
                ..options
            };
            eprintln!("step too large; retrying once with dt halved");
            run_simulation(&cfg, &pulse, &halved)
        }
        other => other,
    }
}

fn cmd_run(run_args: &RunArgs) -> ExitCode {
    let point = match run_args.point.resolve() {
        Ok(p) => p,
        Err(e) => return bad_args(e),
    };
    let run = match simulate_with_retry(&point) {
        Ok(r) => r,
        Err(e) => return report_engine_error(e),
    };

    let csv_path = run_args.out.with_extension("csv");
    let report_path = run_args.out.with_extension("report.json");
    let manifest_path = run_args.out.with_extension("manifest.json");
    let manifest_name = manifest_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();

    let parameters = ManifestParameters::from_point(&point);
    let mut manifest = RunManifest::new("run", parameters.clone());
    manifest.grid_dt = Some(run.grid.dt);
    manifest.grid_pulse_steps = Some(run.grid.pulse_steps);
    manifest.outputs = vec![
        csv_path.to_string_lossy().into_owned(),
        report_path.to_string_lossy().into_owned(),
    ];

    let io_fail = |e: std::io::Error| -> ExitCode {
        eprintln!("error: writing outputs: {e}");
        ExitCode::from(EXIT_BAD_ARGS)
    };
    if let Err(e) = manifest.write(&manifest_path) {
        return io_fail(e);
    }
    if let Err(e) = outputs::write_series_csv(&csv_path, &manifest_name, &run) {
        return io_fail(e);
    }
    if let Err(e) = outputs::write_report_json(&report_path, &manifest_name, &parameters, &run) {
        return io_fail(e);
    }
    ExitCode::SUCCESS
}

fn cmd_oracle(oracle_args: &OracleArgs) -> ExitCode {
    let report = match oracle_cmd::run_oracle(oracle_args.which) {
        Ok(r) => r,
        Err(e) => return report_engine_error(e),
    };
    let mut text = serde_json::to_string_pretty(&report).expect("oracle serialization");
    text.push('\n');
    print!("{text}");
    if let Some(path) = &oracle_args.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(EXIT_BAD_ARGS);
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_ORACLE_FAIL)
    }
}
