//! Engine-versus-oracle comparisons, one JSON report per oracle family.

use serde::Serialize;
use superfluence::dicke::{evolve, CollectiveState, Grid};
use superfluence::driver::{run_simulation, RunOptions};
use superfluence::model::{PulseShape, PulseSpec, SystemConfig};
use superfluence::oracles::semiclassical::{
    constants_of_motion_drift, linearized_reference, raw_semiclassical_evolve,
    semiclassical_evolve, OracleGrid, RawSemiclassicalState,
};
use superfluence::oracles::{
    fock, long_pulse_reference, phase_spread_estimate, short_pulse_reference,
    single_atom_regression,
};
use superfluence::regression::{evolve_slab, seed_slab};
use superfluence::tolerances as tol;
use superfluence::{C64, Result};

use crate::args::OracleKind;

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub engine: f64,
    pub oracle: f64,
    pub abs_deviation: f64,
    pub rel_deviation: f64,
    pub tolerance: f64,
    /// Whether the tolerance is on the relative (true) or absolute deviation.
    pub relative: bool,
    pub pass: bool,
}

impl OracleCheck {
    fn absolute(name: &str, engine: f64, oracle: f64, tolerance: f64) -> Self {
        let abs = (engine - oracle).abs();
        let rel = abs / oracle.abs().max(f64::MIN_POSITIVE);
        OracleCheck {
            name: name.to_string(),
            engine,
            oracle,
            abs_deviation: abs,
            rel_deviation: rel,
            tolerance,
            relative: false,
            pass: abs <= tolerance,
        }
    }

    fn relative(name: &str, engine: f64, oracle: f64, tolerance: f64) -> Self {
        let abs = (engine - oracle).abs();
        let rel = abs / oracle.abs().max(f64::MIN_POSITIVE);
        OracleCheck {
            name: name.to_string(),
            engine,
            oracle,
            abs_deviation: abs,
            rel_deviation: rel,
            tolerance,
            relative: true,
            pass: rel <= tolerance,
        }
    }

    /// An upper bound: `engine <= oracle + tolerance`.
    fn bounded(name: &str, engine: f64, bound: f64, tolerance: f64) -> Self {
        OracleCheck {
            name: name.to_string(),
            engine,
            oracle: bound,
            abs_deviation: (engine - bound).max(0.0),
            rel_deviation: 0.0,
            tolerance,
            relative: false,
            pass: engine <= bound + tolerance,
        }
    }

    /// A lower bound: `engine >= oracle - tolerance`.
    fn floor(name: &str, engine: f64, bound: f64, tolerance: f64) -> Self {
        OracleCheck {
            name: name.to_string(),
            engine,
            oracle: bound,
            abs_deviation: (bound - engine).max(0.0),
            rel_deviation: 0.0,
            tolerance,
            relative: false,
            pass: engine >= bound - tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub which: String,
    pub checks: Vec<OracleCheck>,
    pub pass: bool,
}

pub fn run_oracle(which: OracleKind) -> Result<OracleReport> {
    let checks = match which {
        OracleKind::ShortPulse => short_pulse_checks()?,
        OracleKind::LongPulse => long_pulse_checks()?,
        OracleKind::SingleAtom => single_atom_checks()?,
        OracleKind::Pacs => pacs_checks(),
        OracleKind::Jc => jc_checks(),
        OracleKind::Semiclassical => semiclassical_checks()?,
        OracleKind::DeltaY => delta_y_checks()?,
    };
    let pass = checks.iter().all(|c| c.pass);
    let which = format!("{which:?}");
    Ok(OracleReport { which, checks, pass })
}

fn short_pulse_checks() -> Result<Vec<OracleCheck>> {
    let cfg = SystemConfig::new(10, 1.0)?;
    let pulse = PulseSpec::new(PulseShape::Rectangular, 0.01, std::f64::consts::PI, 0.0)?;
    let run = run_simulation(&cfg, &pulse, &RunOptions::default())?;
    let reference = short_pulse_reference(&cfg, &pulse)?;

    // Worst coherence deviation from the analytic trajectory over the pulse.
    let grid = run.grid;
    let mut worst = 0.0f64;
    for k in 0..=grid.pulse_steps {
        let t = run.series.t[k];
        worst = worst.max((run.series.j_minus[k] - reference.j_minus(t)).norm());
    }

    let r = &run.report;
    Ok(vec![
        OracleCheck::absolute("p_a_short_limit", r.p_a, 1.0, tol::SHORT_PULSE_PROB_ABS),
        OracleCheck::absolute("p_ac_short_limit", r.p_ac, 1.0, tol::SHORT_PULSE_PROB_ABS),
        OracleCheck::bounded("p_b_short_limit", r.p_b, 0.0, tol::SHORT_PULSE_PB_MAX),
        OracleCheck::relative(
            "gain_short_limit",
            r.gain.unwrap_or(f64::NAN),
            reference.gain_limit(),
            tol::SHORT_PULSE_GAIN_REL,
        ),
        OracleCheck::bounded(
            "j_minus_trajectory_worst",
            worst,
            0.0,
            0.03 * cfg.atom_count as f64,
        ),
    ])
}

fn long_pulse_checks() -> Result<Vec<OracleCheck>> {
    let cfg = SystemConfig::new(10, 1.0)?;
    let pulse = PulseSpec::new(PulseShape::Rectangular, 100.0, std::f64::consts::PI, 0.0)?;
    let run = run_simulation(&cfg, &pulse, &RunOptions::default())?;
    let reference = long_pulse_reference(&cfg, &pulse)?;
    let r = &run.report;
    Ok(vec![
        OracleCheck::absolute("p_a_long_limit", r.p_a, reference.p_a, tol::LONG_PULSE_PROB_ABS),
        OracleCheck::absolute("p_b_long_limit", r.p_b, reference.p_b, tol::LONG_PULSE_PROB_ABS),
        OracleCheck::absolute(
            "p_ac_long_limit",
            r.p_ac,
            reference.p_ac,
            tol::LONG_PULSE_PROB_ABS,
        ),
    ])
}

fn single_atom_checks() -> Result<Vec<OracleCheck>> {
    let cfg = SystemConfig::new(1, 1.0)?;
    let pulse = PulseSpec::new(PulseShape::Rectangular, 0.5, 0.0, 0.0)?;
    let grid = Grid::with_dt(&pulse, &cfg, 2.5e-4)?.with_t_end(1.0);
    let evo = evolve(&cfg, &pulse, &grid)?;

    let mut worst = 0.0f64;
    for &k1 in &[0usize, 800, 2000] {
        let t1 = evo.series.t[k1];
        let mut s = superfluence::dicke::DickeMatrix::zeros(1);
        s[(1, 1)] = C64::new(evo.series.jpjm[k1], 0.0);
        s[(0, 0)] = C64::new(1.0 - evo.series.jpjm[k1], 0.0);
        let slab = seed_slab(&CollectiveState { t: t1, s });
        let traj = evolve_slab(&slab, &pulse, &cfg, &grid, t1 + 1.5)?;
        for (j, &t2) in traj.t2.iter().enumerate() {
            let dev = (traj.plus_minus[j] - single_atom_regression(t1, t2, cfg.gamma)).norm();
            worst = worst.max(dev);
        }
    }
    Ok(vec![OracleCheck::bounded(
        "single_atom_two_time_worst",
        worst,
        0.0,
        tol::SINGLE_ATOM_REGRESSION_ABS,
    )])
}

fn pacs_checks() -> Vec<OracleCheck> {
    let mut checks = Vec::new();
    let mut worst_rel = 0.0f64;
    for &n in &[1usize, 2, 3, 5, 10] {
        for &n_in in &[0.5, 4.0, 25.0, 100.0] {
            let closed = fock::pacs_coherent_number(n_in, n);
            let brute = fock::pacs_coherent_number_brute(n_in, n);
            worst_rel = worst_rel.max((closed - brute).abs() / brute.abs());
        }
    }
    checks.push(OracleCheck::bounded(
        "pacs_closed_vs_brute_worst_rel",
        worst_rel,
        0.0,
        tol::PACS_ROUTE_REL,
    ));
    for &n in &[1usize, 5, 10] {
        let n_in = 100.0;
        let excess = fock::pacs_coherent_number(n_in, n) - (n_in + n as f64);
        checks.push(OracleCheck::relative(
            &format!("pacs_excess_coherence_n{n}"),
            excess,
            n as f64,
            tol::PACS_EXCESS_REL,
        ));
    }
    checks
}

fn jc_checks() -> Vec<OracleCheck> {
    let g = 1.0;
    let mut checks = Vec::new();
    let mut last = 0.0;
    for &n_bar in &[25.0f64, 100.0, 400.0] {
        let t_pi = std::f64::consts::PI / (2.0 * g * n_bar.sqrt());
        let jc = fock::jc_conditional_state(n_bar, g, t_pi);
        checks.push(OracleCheck::floor(
            &format!("jc_decay_monotone_n{n_bar}"),
            jc.decay_probability,
            last,
            0.0,
        ));
        last = jc.decay_probability;
    }
    checks.push(OracleCheck::floor(
        "jc_decay_probability_floor",
        last,
        tol::JC_DECAY_MIN,
        0.0,
    ));
    let exact = fock::jc_conditional_state(400.0, g, std::f64::consts::PI / (2.0 * g * 20.0));
    let overlap = fock::fock_overlap(&exact.exact, &fock::jc_two_branch_state(400.0));
    checks.push(OracleCheck::floor("jc_two_branch_overlap_floor", overlap, 0.99, 0.0));
    checks
}

fn semiclassical_checks() -> Result<Vec<OracleCheck>> {
    let g = 1.0;
    let n_bar = 1e3f64;
    let m = 2.5;
    let t_pi = std::f64::consts::PI / (2.0 * g * n_bar.sqrt());
    let grid = OracleGrid { dt: t_pi / 2000.0, t_end: t_pi };
    let raw = raw_semiclassical_evolve(
        RawSemiclassicalState { a: C64::new(n_bar.sqrt(), 0.0), j_minus: C64::new(m, 0.0), jz: 0.0 },
        g,
        grid,
    );
    let drift = constants_of_motion_drift(&raw);

    // Reduced-system phase against its linearization at large n_bar.
    let n_big = 1e4f64;
    let t_pi_big = std::f64::consts::PI / (2.0 * g * n_big.sqrt());
    let grid_big = OracleGrid { dt: t_pi_big / 4000.0, t_end: t_pi_big };
    let traj = semiclassical_evolve(0.5, 0.5, n_big, g, grid_big)?;
    let mut worst_rel = 0.0f64;
    for (k, &t) in traj.t.iter().enumerate().skip(400) {
        let (phi_lin, _) = linearized_reference(0.5, n_big, g, t);
        worst_rel = worst_rel.max((traj.phi[k] - phi_lin).abs() / phi_lin.abs());
    }

    Ok(vec![
        OracleCheck::bounded("semiclassical_constants_drift", drift, 0.0, tol::SEMICLASSICAL_DRIFT),
        OracleCheck::bounded("semiclassical_linearized_phase_rel", worst_rel, 0.0, 0.05),
    ])
}

fn delta_y_checks() -> Result<Vec<OracleCheck>> {
    let mut checks = Vec::new();
    for &tp in &[0.1, 0.3] {
        let cfg = SystemConfig::new(10, 1.0)?;
        let pulse = PulseSpec::new(PulseShape::Rectangular, tp, std::f64::consts::PI, 0.0)?;
        let run = run_simulation(
            &cfg,
            &pulse,
            &RunOptions { quadratures: true, ..RunOptions::default() },
        )?;
        let r = &run.report;
        let (_, dy_estimate) =
            phase_spread_estimate(cfg.atom_count, r.n_in, r.gain.unwrap_or(f64::NAN));
        checks.push(OracleCheck::relative(
            &format!("delta_y_vs_single_mode_tp{tp}"),
            r.delta_y.unwrap_or(f64::NAN),
            dy_estimate,
            tol::DELTA_Y_REL,
        ));
    }
    Ok(checks)
}
