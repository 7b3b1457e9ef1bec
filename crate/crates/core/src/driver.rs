//! One-call simulation front end shared by the CLI and the test suites.

use crate::dicke::{evolve, Grid, TimeSeries};
use crate::metrics::{
    emission_probabilities, gain_and_snr, mode_amplitudes, output_moments, photon_numbers,
    project_mode, AmplifierReport, ModeFunction, QuadratureReport,
};
use crate::model::{PulseSpec, SystemConfig};
use crate::regression::assemble_two_time_from;
use crate::Result;

/// Knobs for a single simulation run.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Step override; defaults to the coarsest admissible step.
    pub dt: Option<f64>,
    /// Earliest stopping time; defaults to `t_p` (the run self-extends until
    /// the atoms have decayed).
    pub t_end: Option<f64>,
    /// Run the two-time engine and fill the quadrature fields.
    pub quadratures: bool,
}

/// A fully evaluated configuration.
#[derive(Clone, Debug)]
pub struct SimulationRun {
    pub grid: Grid,
    pub series: TimeSeries,
    pub report: AmplifierReport,
    pub quadratures: Option<QuadratureReport>,
}

/// Simulate one `(config, pulse)` point end to end.
pub fn run_simulation(
    config: &SystemConfig,
    pulse: &PulseSpec,
    options: &RunOptions,
) -> Result<SimulationRun> {
    let mut grid = match options.dt {
        Some(dt) => Grid::with_dt(pulse, config, dt)?,
        None => Grid::for_pulse(pulse, config),
    };
    if let Some(t_end) = options.t_end {
        grid = grid.with_t_end(t_end.max(pulse.t_p));
    }

    let evo = evolve(config, pulse, &grid)?;
    let mut series = evo.series;
    output_moments(&mut series, config);

    let numbers = photon_numbers(&series, config);
    let probabilities = emission_probabilities(&numbers, config);
    let mode = ModeFunction::matched(pulse, grid.dt, grid.pulse_steps);

    let quadratures = if options.quadratures {
        let grid2 = assemble_two_time_from(
            config,
            pulse,
            &grid,
            &evo.pulse_window_states,
            &series.j_minus,
        )?;
        Some(project_mode(&series, &grid2, &mode, config)?)
    } else {
        None
    };

    let (c_in, c_out) = match &quadratures {
        Some(q) => (q.c_in, q.c_out),
        None => mode_amplitudes(&series, &mode, config)?,
    };
    let gain = gain_and_snr(c_in, c_out, quadratures.as_ref().map(|q| q.delta_x), config)?;
    let report =
        AmplifierReport::assemble(&numbers, &probabilities, &gain, quadratures.as_ref(), config);

    Ok(SimulationRun { grid, series, report, quadratures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PulseShape;
    use std::f64::consts::PI;

    #[test]
    fn full_run_produces_consistent_report() {
        let cfg = SystemConfig::new(4, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Rectangular, 0.2, PI, 0.0).unwrap();
        let run = run_simulation(&cfg, &pulse, &RunOptions::default()).unwrap();
        let r = &run.report;
        assert!(r.conservation_residual.abs() < 1e-3, "residual {}", r.conservation_residual);
        assert!(r.n_ac <= r.n_a + 1e-9);
        assert!(r.n_bc <= r.n_b + 1e-9);
        assert!(r.gain.unwrap() > 1.0);
        assert!(r.delta_x.is_none());
    }

    #[test]
    fn quadrature_run_fills_the_optional_fields() {
        let cfg = SystemConfig::new(2, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Sine, 0.1, PI, 0.0).unwrap();
        let run = run_simulation(
            &cfg,
            &pulse,
            &RunOptions { quadratures: true, ..RunOptions::default() },
        )
        .unwrap();
        let r = &run.report;
        assert!(r.delta_x.unwrap() >= 0.5 - 1e-6);
        assert!(r.delta_y.unwrap() >= 0.5 - 1e-6);
        assert!(r.r_sn.unwrap() > 0.0);
    }
}
