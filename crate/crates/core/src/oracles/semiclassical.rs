//! Semiclassical (factorized) single-mode model of the atoms-field coupling,
//! used to estimate the phase spread of the amplified pulse.
//!
//! With `<a> = r e^{i phi}`, `<J_-> = s cos(eta) e^{i zeta}` and
//! `<J_z> = s sin(eta)`, the factorized Heisenberg equations reduce to three
//! angles with `r` eliminated through the conserved `N_tot = r^2 + s sin(eta)`:
//!
//! ```text
//! phi'  = -(g s / r) cos(eta) cos(phi - zeta)
//! zeta' = 2 g r tan(eta) cos(phi - zeta)
//! eta'  = 2 g r sin(phi - zeta)
//! ```
//!
//! This integrator shares no code with the waveguide engines: it is a
//! stand-alone RK4 kernel on three real variables.

use num_complex::Complex64 as C64;

use crate::{EngineError, Result};

/// Plain uniform grid for the oracle integrators.
#[derive(Clone, Copy, Debug)]
pub struct OracleGrid {
    pub dt: f64,
    pub t_end: f64,
}

/// Reduced semiclassical trajectory.
#[derive(Clone, Debug)]
pub struct SemiclassicalTrajectory {
    pub m: f64,
    pub s: f64,
    pub n_bar: f64,
    pub g: f64,
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub zeta: Vec<f64>,
    pub eta: Vec<f64>,
}

/// Integrate the reduced system from `r(0) = sqrt(n_bar)`,
/// `phi = zeta = eta = 0`, with spin length `s` (equal to `|m|` when starting
/// from an x-basis eigenstate `|m>_x`).
pub fn semiclassical_evolve(
    m: f64,
    s: f64,
    n_bar: f64,
    g: f64,
    grid: OracleGrid,
) -> Result<SemiclassicalTrajectory> {
    semiclassical_evolve_from([0.0; 3], m, s, n_bar, g, grid)
}

/// [`semiclassical_evolve`] with explicit initial angles
/// `[phi(0), zeta(0), eta(0)]`; `r(0) = sqrt(n_bar)` always.
///
/// With `phi(0) - zeta(0) = pi/2` the interaction energy vanishes and the
/// field can be fully absorbed, which is how trajectories reach the
/// `r^2 <= 0` boundary of the change of variables.
pub fn semiclassical_evolve_from(
    initial: [f64; 3],
    m: f64,
    s: f64,
    n_bar: f64,
    g: f64,
    grid: OracleGrid,
) -> Result<SemiclassicalTrajectory> {
    if !(n_bar > 0.0) {
        return Err(EngineError::InvalidConfig("n_bar must be > 0".into()));
    }
    let n_tot = n_bar + s * initial[2].sin(); // r(0)^2 + s sin(eta(0))
    let r_of = |eta: f64, t: f64| -> Result<f64> {
        let r2 = n_tot - s * eta.sin();
        if r2 <= 0.0 {
            return Err(EngineError::SingularAmplitude(r2, t));
        }
        Ok(r2.sqrt())
    };
    let rhs = |y: [f64; 3], t: f64| -> Result<[f64; 3]> {
        let [phi, zeta, eta] = y;
        let r = r_of(eta, t)?;
        let d = phi - zeta;
        Ok([
            -(g * s / r) * eta.cos() * d.cos(),
            2.0 * g * r * eta.tan() * d.cos(),
            2.0 * g * r * d.sin(),
        ])
    };

    let steps = (grid.t_end / grid.dt).round() as usize;
    let mut y = initial;
    let mut out = SemiclassicalTrajectory {
        m,
        s,
        n_bar,
        g,
        t: Vec::with_capacity(steps + 1),
        r: Vec::with_capacity(steps + 1),
        phi: Vec::with_capacity(steps + 1),
        zeta: Vec::with_capacity(steps + 1),
        eta: Vec::with_capacity(steps + 1),
    };
    for k in 0..=steps {
        let t = k as f64 * grid.dt;
        out.t.push(t);
        out.r.push(r_of(y[2], t)?);
        out.phi.push(y[0]);
        out.zeta.push(y[1]);
        out.eta.push(y[2]);
        if k == steps {
            break;
        }
        let h = grid.dt;
        let k1 = rhs(y, t)?;
        let k2 = rhs(add(y, k1, h / 2.0), t + h / 2.0)?;
        let k3 = rhs(add(y, k2, h / 2.0), t + h / 2.0)?;
        let k4 = rhs(add(y, k3, h), t + h)?;
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
    }
    Ok(out)
}

fn add(y: [f64; 3], k: [f64; 3], h: f64) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Leading-order solution for small `eta`, `phi`:
/// `phi(t) ~ zeta(t) ~ -g m t / sqrt(n_bar)` and
/// `eta(t) ~ -(m / n_bar) sin^2(g sqrt(n_bar) t)`.
pub fn linearized_reference(m: f64, n_bar: f64, g: f64, t: f64) -> (f64, f64) {
    let phi = -g * m * t / n_bar.sqrt();
    let eta = -(m / n_bar) * (g * n_bar.sqrt() * t).sin().powi(2);
    (phi, eta)
}

/// State of the unreduced factorized system `(<a>, <J_->, <J_z>)`.
#[derive(Clone, Copy, Debug)]
pub struct RawSemiclassicalState {
    pub a: C64,
    pub j_minus: C64,
    pub jz: f64,
}

impl RawSemiclassicalState {
    /// Conserved spin length `sqrt(|<J_->|^2 + <J_z>^2)`.
    pub fn spin_length(&self) -> f64 {
        (self.j_minus.norm_sqr() + self.jz * self.jz).sqrt()
    }

    /// Conserved excitation `|<a>|^2 + <J_z>`.
    pub fn total_excitation(&self) -> f64 {
        self.a.norm_sqr() + self.jz
    }
}

/// Integrate the unreduced factorized equations
/// `a' = -i g J_-`, `J_-' = 2 i g J_z a`, `J_z' = 2 g Im(conj(J_-) a)`.
///
/// Serves as the independent check that the change of variables used by
/// [`semiclassical_evolve`] conserves its two constants of the motion.
pub fn raw_semiclassical_evolve(
    initial: RawSemiclassicalState,
    g: f64,
    grid: OracleGrid,
) -> Vec<(f64, RawSemiclassicalState)> {
    let rhs = |y: RawSemiclassicalState| -> (C64, C64, f64) {
        (
            -C64::i() * g * y.j_minus,
            2.0 * C64::i() * g * y.jz * y.a,
            2.0 * g * (y.j_minus.conj() * y.a).im,
        )
    };
    let steps = (grid.t_end / grid.dt).round() as usize;
    let mut y = initial;
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        out.push((k as f64 * grid.dt, y));
        if k == steps {
            break;
        }
        let h = grid.dt;
        let step = |y: RawSemiclassicalState, d: (C64, C64, f64), h: f64| RawSemiclassicalState {
            a: y.a + h * d.0,
            j_minus: y.j_minus + h * d.1,
            jz: y.jz + h * d.2,
        };
        let k1 = rhs(y);
        let k2 = rhs(step(y, k1, h / 2.0));
        let k3 = rhs(step(y, k2, h / 2.0));
        let k4 = rhs(step(y, k3, h));
        y = RawSemiclassicalState {
            a: y.a + h / 6.0 * (k1.0 + 2.0 * (k2.0 + k3.0) + k4.0),
            j_minus: y.j_minus + h / 6.0 * (k1.1 + 2.0 * (k2.1 + k3.1) + k4.1),
            jz: y.jz + h / 6.0 * (k1.2 + 2.0 * (k2.2 + k3.2) + k4.2),
        };
    }
    out
}

/// Largest relative drift of the two constants of the motion along a raw
/// trajectory.
pub fn constants_of_motion_drift(trajectory: &[(f64, RawSemiclassicalState)]) -> f64 {
    let s0 = trajectory[0].1.spin_length();
    let n0 = trajectory[0].1.total_excitation();
    let mut worst = 0.0f64;
    for (_, y) in trajectory {
        worst = worst.max((y.spin_length() - s0).abs() / s0.abs().max(1e-300));
        worst = worst.max((y.total_excitation() - n0).abs() / n0.abs().max(1e-300));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_pi(g: f64, n_bar: f64) -> f64 {
        std::f64::consts::PI / (2.0 * g * n_bar.sqrt())
    }

    #[test]
    fn constants_of_motion_are_conserved() {
        let g = 1.0;
        let n_bar = 1e3;
        let m = 2.5; // N/4 for ten atoms
        let end = t_pi(g, n_bar);
        let grid = OracleGrid { dt: end / 2000.0, t_end: end };
        let initial = RawSemiclassicalState {
            a: C64::new(n_bar.sqrt(), 0.0),
            j_minus: C64::new(m, 0.0),
            jz: 0.0,
        };
        let traj = raw_semiclassical_evolve(initial, g, grid);
        let drift = constants_of_motion_drift(&traj);
        assert!(drift < 1e-6, "drift {drift}");
    }

    #[test]
    fn reduced_and_raw_systems_agree() {
        let g = 1.0;
        let n_bar = 500.0;
        let m = 1.5;
        let end = t_pi(g, n_bar);
        let grid = OracleGrid { dt: end / 4000.0, t_end: end };
        let reduced = semiclassical_evolve(m, m, n_bar, g, grid).unwrap();
        let raw = raw_semiclassical_evolve(
            RawSemiclassicalState {
                a: C64::new(n_bar.sqrt(), 0.0),
                j_minus: C64::new(m, 0.0),
                jz: 0.0,
            },
            g,
            grid,
        );
        for (k, (_, y)) in raw.iter().enumerate().step_by(500) {
            let a_reduced = C64::from_polar(reduced.r[k], reduced.phi[k]);
            assert!(
                (a_reduced - y.a).norm() < 1e-6 * n_bar.sqrt(),
                "k = {k}: {a_reduced} vs {}",
                y.a
            );
            assert!((reduced.s * reduced.eta[k].sin() - y.jz).abs() < 1e-6 * m);
        }
    }

    /// `phi(t)` follows the linearized drift through a quarter Rabi cycle.
    #[test]
    fn linearized_phase_within_five_percent() {
        let g = 1.0;
        let n_bar = 1e4;
        let m = 0.5;
        let end = t_pi(g, n_bar); // g t sqrt(n_bar) = pi/2 at the end
        let grid = OracleGrid { dt: end / 4000.0, t_end: end };
        let traj = semiclassical_evolve(m, m, n_bar, g, grid).unwrap();
        for (k, &t) in traj.t.iter().enumerate().skip(400) {
            let (phi_lin, _) = linearized_reference(m, n_bar, g, t);
            let rel = (traj.phi[k] - phi_lin).abs() / phi_lin.abs();
            assert!(rel < 0.05, "t = {t}: {} vs {phi_lin}", traj.phi[k]);
        }
    }

    #[test]
    fn linearized_eta_profile() {
        let g = 1.0;
        let n_bar = 1e4;
        let m = 0.5;
        let end = t_pi(g, n_bar);
        let grid = OracleGrid { dt: end / 4000.0, t_end: end };
        let traj = semiclassical_evolve(m, m, n_bar, g, grid).unwrap();
        let mut worst = 0.0f64;
        for (k, &t) in traj.t.iter().enumerate() {
            let (_, eta_lin) = linearized_reference(m, n_bar, g, t);
            worst = worst.max((traj.eta[k] - eta_lin).abs());
        }
        // eta amplitude is m/n_bar = 5e-5; allow a few percent of it.
        assert!(worst < 0.05 * m / n_bar, "worst {worst}");
    }

    #[test]
    fn zero_spin_projection_is_a_fixed_point() {
        let g = 1.0;
        let n_bar = 100.0;
        let end = t_pi(g, n_bar);
        let grid = OracleGrid { dt: end / 1000.0, t_end: end };
        let traj = semiclassical_evolve(0.0, 0.0, n_bar, g, grid).unwrap();
        assert!(traj.phi.iter().all(|&v| v == 0.0));
        assert!(traj.eta.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn leaving_validity_region_is_an_error() {
        // Field in quadrature with the spin (zero interaction energy) and
        // s > n_bar: the field is fully absorbed and r^2 crosses zero.
        let g = 1.0;
        let n_bar = 4.0;
        let grid = OracleGrid { dt: 1e-4, t_end: 10.0 };
        let initial = [std::f64::consts::FRAC_PI_2, 0.0, 0.0];
        match semiclassical_evolve_from(initial, 40.0, 40.0, n_bar, g, grid) {
            Err(EngineError::SingularAmplitude(_, _)) => {}
            other => panic!("expected SingularAmplitude, got {:?}", other.map(|t| t.t.len())),
        }
    }
}
