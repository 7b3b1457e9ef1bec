// Scratch diagnostic: reference-figure photon numbers and sweep-grid cost.
use std::time::Instant;
use superfluence::driver::{run_simulation, RunOptions};
use superfluence::model::{PulseShape, PulseSpec, SystemConfig};

fn main() {
    let start = Instant::now();
    for shape in [PulseShape::Rectangular, PulseShape::Sine] {
        let cfg = SystemConfig::new(10, 1.0).unwrap();
        let pulse = PulseSpec::new(shape, 0.2, std::f64::consts::PI, 0.0).unwrap();
        let run = run_simulation(&cfg, &pulse, &RunOptions::default()).unwrap();
        let r = &run.report;
        println!(
            "{shape:?}: N_in={:.4} N_a={:.4} N_ac={:.4} N_b={:.4} residual={:.2e} [{:.1?}]",
            r.n_in,
            r.n_a,
            r.n_ac,
            r.n_b,
            r.conservation_residual,
            start.elapsed()
        );
    }

    // Conservation-grid cost probe: the worst corners of the acceptance grid.
    for (n, tp) in [(20usize, 0.01), (20, 100.0), (1, 0.01)] {
        let t0 = Instant::now();
        let cfg = SystemConfig::new(n, 1.0).unwrap();
        let pulse = PulseSpec::new(PulseShape::Sine, tp, std::f64::consts::PI, 0.0).unwrap();
        let run = run_simulation(&cfg, &pulse, &RunOptions::default()).unwrap();
        println!(
            "N={n} tp={tp}: residual={:.2e} points={} [{:.1?}]",
            run.report.conservation_residual,
            run.series.len(),
            t0.elapsed()
        );
    }
}
