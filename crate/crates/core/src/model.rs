//! System and pulse configuration, drive envelopes, and analytic input
//! photon numbers.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{EngineError, Result};

/// Static parameters of the atoms-plus-waveguide system.
///
/// Everything is expressed in units of the radiative decay rate: times in
/// `1/gamma`, rates in `gamma`. Simulations run in the frame rotating at the
/// pulse carrier, so with `detuning = 0` the carrier phase factors drop out
/// of all equations of motion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    /// Number of two-level atoms, `1..=64`.
    pub atom_count: usize,
    /// Radiative decay rate into the waveguide (both ports combined).
    pub gamma: f64,
    /// Reference phase of the input pulse; quadrature axes are defined
    /// relative to it.
    pub theta: f64,
    /// Atom-carrier detuning `omega_a - omega_p` in units of `gamma`.
    pub detuning: f64,
}

impl SystemConfig {
    pub const MAX_ATOMS: usize = 64;

    pub fn new(atom_count: usize, gamma: f64) -> Result<Self> {
        let cfg = SystemConfig { atom_count, gamma, theta: 0.0, detuning: 0.0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.atom_count < 1 {
            return Err(EngineError::InvalidConfig("atom_count must be >= 1".into()));
        }
        if self.atom_count > Self::MAX_ATOMS {
            return Err(EngineError::InvalidConfig(format!(
                "atom_count {} exceeds the dense-ladder limit {}",
                self.atom_count,
                Self::MAX_ATOMS
            )));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(EngineError::InvalidConfig("gamma must be finite and > 0".into()));
        }
        if !self.theta.is_finite() || !self.detuning.is_finite() {
            return Err(EngineError::InvalidConfig("theta/detuning must be finite".into()));
        }
        Ok(())
    }
}

/// Envelope shape of the drive pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PulseShape {
    Rectangular,
    Sine,
}

/// A coherent drive pulse with support `[0, t_p)`.
///
/// `area` is the usual pulse area `sqrt(2 gamma) |∫ E(t) dt|`; it is a free
/// parameter so that area sweeps (not only pi pulses) can be simulated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub shape: PulseShape,
    /// Pulse duration in units of `1/gamma`.
    pub t_p: f64,
    /// Dimensionless pulse area in radians.
    pub area: f64,
    /// Carrier phase of the pulse.
    pub theta: f64,
}

impl PulseSpec {
    pub fn new(shape: PulseShape, t_p: f64, area: f64, theta: f64) -> Result<Self> {
        let pulse = PulseSpec { shape, t_p, area, theta };
        pulse.validate()?;
        Ok(pulse)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_p > 0.0) || !self.t_p.is_finite() {
            return Err(EngineError::InvalidConfig("t_p must be finite and > 0".into()));
        }
        if !(self.area >= 0.0) || !self.area.is_finite() {
            return Err(EngineError::InvalidConfig("area must be finite and >= 0".into()));
        }
        if !self.theta.is_finite() {
            return Err(EngineError::InvalidConfig("theta must be finite".into()));
        }
        Ok(())
    }

    /// Peak (rectangular) or amplitude prefactor (sine) of the envelope.
    ///
    /// Rectangular: `Omega / sqrt(2 gamma)` with `Omega = area / t_p`.
    /// Sine: `area * pi / (2 t_p sqrt(2 gamma))`, so that the integrated area
    /// matches the `area` field for either shape.
    pub fn amplitude(&self, config: &SystemConfig) -> f64 {
        let root = (2.0 * config.gamma).sqrt();
        match self.shape {
            PulseShape::Rectangular => self.area / self.t_p / root,
            PulseShape::Sine => self.area * std::f64::consts::PI / (2.0 * self.t_p * root),
        }
    }

    /// Rabi frequency of the equivalent rectangular drive, `area / t_p`.
    pub fn rabi_frequency(&self) -> f64 {
        self.area / self.t_p
    }

    /// Envelope value ignoring the support window. Callers that integrate
    /// across the edges of the pulse use this together with the grid index to
    /// obtain the correct one-sided limits.
    pub(crate) fn envelope_unclamped(&self, config: &SystemConfig, t: f64) -> C64 {
        let phase = C64::from_polar(1.0, self.theta);
        match self.shape {
            PulseShape::Rectangular => phase * self.amplitude(config),
            PulseShape::Sine => {
                phase * self.amplitude(config) * (std::f64::consts::PI * t / self.t_p).sin()
            }
        }
    }
}

/// Rotating-frame drive amplitude `E(t)` of the pulse.
///
/// The support is the half-open interval `[0, t_p)`: exactly at `t = t_p` the
/// amplitude is already zero, which pins the rectangular discontinuity to a
/// single grid point.
pub fn envelope(pulse: &PulseSpec, config: &SystemConfig, t: f64) -> C64 {
    if t < 0.0 || t >= pulse.t_p {
        C64::new(0.0, 0.0)
    } else {
        pulse.envelope_unclamped(config, t)
    }
}

/// Mean photon number of the pulse, `∫ |E(t)|^2 dt`, in closed form.
///
/// Rectangular: `area^2 / (2 gamma t_p)`. Sine: `area^2 pi^2 / (16 gamma t_p)`.
pub fn mean_input_photons(pulse: &PulseSpec, config: &SystemConfig) -> f64 {
    let a2 = pulse.area * pulse.area;
    match pulse.shape {
        PulseShape::Rectangular => a2 / (2.0 * config.gamma * pulse.t_p),
        PulseShape::Sine => {
            a2 * std::f64::consts::PI.powi(2) / (16.0 * config.gamma * pulse.t_p)
        }
    }
}

/// Numerically integrated pulse area `sqrt(2 gamma) |∫ E(t) dt|`.
///
/// Self-consistency check for the envelope formulas: the result equals the
/// `area` field to a relative 1e-6 or better.
pub fn pulse_area_check(pulse: &PulseSpec, config: &SystemConfig) -> f64 {
    // Trapezoid over the pulse support with one-sided values at the edges;
    // the integrand is smooth inside, so 20000 panels are ample for 1e-6.
    let n = 20_000usize;
    let h = pulse.t_p / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..=n {
        let t = k as f64 * h;
        let v = pulse.envelope_unclamped(config, t);
        let weight = if k == 0 || k == n { 0.5 } else { 1.0 };
        acc += v * weight;
    }
    (2.0 * config.gamma).sqrt() * (acc * h).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg(gamma: f64) -> SystemConfig {
        SystemConfig::new(10, gamma).unwrap()
    }

    #[test]
    fn rectangular_envelope_value() {
        let pulse = PulseSpec::new(PulseShape::Rectangular, 0.2, PI, 0.0).unwrap();
        let e = envelope(&pulse, &cfg(1.0), 0.1);
        assert_relative_eq!(e.re, PI / (0.2 * 2.0f64.sqrt()), max_relative = 1e-12);
        assert_eq!(e.im, 0.0);
    }

    #[test]
    fn envelope_vanishes_outside_support() {
        let pulse = PulseSpec::new(PulseShape::Sine, 0.2, PI, 0.3).unwrap();
        assert_eq!(envelope(&pulse, &cfg(1.0), -1.0).norm(), 0.0);
        assert_eq!(envelope(&pulse, &cfg(1.0), 0.2).norm(), 0.0);
        assert_eq!(envelope(&pulse, &cfg(1.0), 5.0).norm(), 0.0);
    }

    #[test]
    fn sine_envelope_peak() {
        let pulse = PulseSpec::new(PulseShape::Sine, 0.2, PI, 0.0).unwrap();
        let e = envelope(&pulse, &cfg(1.0), 0.1);
        assert_relative_eq!(e.re, PI * PI / (0.4 * 2.0f64.sqrt()), max_relative = 1e-12);
    }

    #[test]
    fn input_photons_match_figure_values() {
        let rect = PulseSpec::new(PulseShape::Rectangular, 0.2, PI, 0.0).unwrap();
        let sine = PulseSpec::new(PulseShape::Sine, 0.2, PI, 0.0).unwrap();
        let c = cfg(1.0);
        assert_relative_eq!(mean_input_photons(&rect, &c), PI * PI / 0.4, max_relative = 1e-12);
        // Quoted to two decimals as 24.66 / 30.44.
        assert!((mean_input_photons(&rect, &c) - 24.66).abs() < 0.025);
        assert!((mean_input_photons(&sine, &c) - 30.44).abs() < 0.01);
    }

    #[test]
    fn input_photons_scale_inversely_with_duration() {
        let c = cfg(1.0);
        let p1 = PulseSpec::new(PulseShape::Rectangular, 0.2, PI, 0.0).unwrap();
        let p2 = PulseSpec::new(PulseShape::Rectangular, 0.4, PI, 0.0).unwrap();
        assert_relative_eq!(
            mean_input_photons(&p1, &c),
            2.0 * mean_input_photons(&p2, &c),
            max_relative = 1e-12
        );
    }

    #[test]
    fn area_check_examples() {
        let c = cfg(1.0);
        let rect = PulseSpec::new(PulseShape::Rectangular, 0.37, PI, 0.7).unwrap();
        assert_relative_eq!(pulse_area_check(&rect, &c), PI, max_relative = 1e-6);
        let sine = PulseSpec::new(PulseShape::Sine, 1.3, 2.0 * PI, 0.0).unwrap();
        assert_relative_eq!(pulse_area_check(&sine, &c), 2.0 * PI, max_relative = 1e-6);
        let zero = PulseSpec::new(PulseShape::Rectangular, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(pulse_area_check(&zero, &c), 0.0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(PulseSpec::new(PulseShape::Sine, 0.0, PI, 0.0).is_err());
        assert!(PulseSpec::new(PulseShape::Sine, 1.0, -1.0, 0.0).is_err());
        assert!(SystemConfig::new(0, 1.0).is_err());
        assert!(SystemConfig::new(65, 1.0).is_err());
        assert!(SystemConfig::new(4, 0.0).is_err());
    }

    /// `mean_input_photons` against trapezoid integration of `|envelope|^2`
    /// over a grid of areas, durations, shapes and gammas.
    #[test]
    fn closed_form_photon_number_matches_quadrature() {
        for &shape in &[PulseShape::Rectangular, PulseShape::Sine] {
            for &a in &[0.3, 1.0, PI, 2.0 * PI] {
                for &tp in &[0.05, 0.2, 1.0, 10.0] {
                    for &g in &[0.5, 1.0, 2.0] {
                        let c = SystemConfig::new(3, g).unwrap();
                        let pulse = PulseSpec::new(shape, tp, a, 0.4).unwrap();
                        let n = 40_000usize;
                        let h = tp / n as f64;
                        let mut acc = 0.0;
                        for k in 0..=n {
                            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                            acc +=
                                w * pulse.envelope_unclamped(&c, k as f64 * h).norm_sqr();
                        }
                        acc *= h;
                        let closed = mean_input_photons(&pulse, &c);
                        assert_relative_eq!(closed, acc, max_relative = 1e-5);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn envelope_support_is_half_open(
            t in -5.0f64..15.0,
            tp in 0.01f64..5.0,
            area in 0.0f64..7.0,
            theta in 0.0f64..6.3,
        ) {
            let c = cfg(1.0);
            for shape in [PulseShape::Rectangular, PulseShape::Sine] {
                let pulse = PulseSpec::new(shape, tp, area, theta).unwrap();
                let e = envelope(&pulse, &c, t);
                if t < 0.0 || t >= tp {
                    prop_assert_eq!(e.norm(), 0.0);
                } else {
                    prop_assert!(e.norm().is_finite());
                }
            }
        }

        #[test]
        fn area_check_matches_area_field(
            tp in 0.02f64..5.0,
            area in 0.0f64..7.0,
            theta in 0.0f64..6.3,
        ) {
            let c = cfg(1.0);
            for shape in [PulseShape::Rectangular, PulseShape::Sine] {
                let pulse = PulseSpec::new(shape, tp, area, theta).unwrap();
                let got = pulse_area_check(&pulse, &c);
                prop_assert!((got - area).abs() <= 1e-6 * area.max(1e-9));
            }
        }
    }
}
