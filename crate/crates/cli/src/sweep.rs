//! Parameter sweeps: one AmplifierReport row per point, flushed chunk by
//! chunk so an interrupted sweep can resume from its manifest.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use superfluence::driver::{run_simulation, RunOptions};
use superfluence::model::PulseShape;

use crate::args::{ResolvedPoint, SweepArgs, SweepAxis};
use crate::manifest::{ManifestParameters, RunManifest, SweepSettings};
use crate::outputs::{format_sweep_row, SweepRow, SWEEP_HEADER};

pub fn axis_values(args: &SweepArgs) -> Vec<f64> {
    let k = args.points.max(1);
    if k == 1 {
        return vec![args.from];
    }
    (0..k)
        .map(|i| {
            let f = i as f64 / (k - 1) as f64;
            if args.log {
                (args.from.ln() + f * (args.to.ln() - args.from.ln())).exp()
            } else {
                args.from + f * (args.to - args.from)
            }
        })
        .collect()
}

/// The parameter point for one sweep value.
fn point_at(base: &ResolvedPoint, args: &SweepArgs, value: f64) -> ResolvedPoint {
    let mut p = *base;
    match args.axis {
        SweepAxis::Tp => p.tp = value,
        SweepAxis::Area => {
            p.area_pi = value;
            if let Some(n_in) = args.fixed_n_in {
                // Choose t_p so the pulse carries exactly n_in photons.
                let area = value * std::f64::consts::PI;
                p.tp = match p.shape {
                    PulseShape::Rectangular => area * area / (2.0 * p.gamma * n_in),
                    PulseShape::Sine => {
                        area * area * std::f64::consts::PI.powi(2) / (16.0 * p.gamma * n_in)
                    }
                };
            }
        }
        SweepAxis::Atoms => p.atoms = (value.round() as usize).max(1),
    }
    p
}

fn count_data_rows(path: &Path) -> std::io::Result<usize> {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e),
    };
    let reader = std::io::BufReader::new(file);
    let mut rows = 0usize;
    for line in reader.lines() {
        let line = line?;
        if line.starts_with('#') || line == SWEEP_HEADER || line.is_empty() {
            continue;
        }
        rows += 1;
    }
    Ok(rows)
}

pub fn run_sweep(args: &SweepArgs, base: &ResolvedPoint) -> superfluence::Result<()> {
    let values = axis_values(args);
    let csv_path = args.out.with_extension("csv");
    let manifest_path = args.out.with_extension("manifest.json");
    let manifest_name = manifest_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut manifest = RunManifest::new("sweep", ManifestParameters::from_point(base));
    manifest.sweep = Some(SweepSettings {
        axis: format!("{:?}", args.axis).to_lowercase(),
        from: args.from,
        to: args.to,
        points: args.points,
        log: args.log,
        fixed_n_in: args.fixed_n_in,
    });
    manifest.outputs = vec![csv_path.to_string_lossy().into_owned()];

    // Resume only when the previous manifest describes the same computation.
    let io = |e: std::io::Error| {
        superfluence::EngineError::InvalidConfig(format!("sweep output: {e}"))
    };
    let resume_rows = match RunManifest::read(&manifest_path).map_err(io)? {
        Some(previous) if previous.same_computation(&manifest) => {
            count_data_rows(&csv_path).map_err(io)?
        }
        _ => 0,
    };
    manifest.write(&manifest_path).map_err(io)?;

    let mut file = if resume_rows > 0 {
        std::fs::OpenOptions::new().append(true).open(&csv_path).map_err(io)?
    } else {
        let mut f = std::fs::File::create(&csv_path).map_err(io)?;
        writeln!(f, "# manifest: {manifest_name}").map_err(io)?;
        writeln!(f, "{SWEEP_HEADER}").map_err(io)?;
        f
    };
    if resume_rows >= values.len() {
        return Ok(());
    }

    // Points are independent; evaluate chunk-parallel but write in order so
    // identical manifests give identical bytes.
    let chunk = rayon::current_num_threads().max(1) * 2;
    let mut done = resume_rows;
    while done < values.len() {
        let upto = (done + chunk).min(values.len());
        let slice: Vec<(usize, f64)> =
            (done..upto).map(|i| (i, values[i])).collect();
        let rows: Vec<superfluence::Result<SweepRow>> = slice
            .par_iter()
            .map(|&(_, value)| {
                let p = point_at(base, args, value);
                let cfg = p.system_config()?;
                let pulse = p.pulse()?;
                let options = RunOptions {
                    dt: p.dt,
                    t_end: p.t_end,
                    quadratures: p.quadratures,
                };
                let run = run_simulation(&cfg, &pulse, &options)?;
                Ok(SweepRow {
                    axis_value: value,
                    atoms: p.atoms,
                    shape: match p.shape {
                        PulseShape::Rectangular => "rect",
                        PulseShape::Sine => "sine",
                    },
                    area_pi: p.area_pi,
                    tp: p.tp,
                    theta: p.theta,
                    gamma: p.gamma,
                    report: run.report,
                })
            })
            .collect();
        for row in rows {
            let row = row?;
            writeln!(file, "{}", format_sweep_row(&row)).map_err(io)?;
        }
        file.flush().map_err(io)?;
        done = upto;
    }
    Ok(())
}
