//! Observables of the scattering process: output-field moments, photon
//! numbers, per-atom emission probabilities, mode-matched quadrature
//! fluctuations, gain and signal-to-noise.
//!
//! All time integrals are trapezoidal on the integration grid. Integrands
//! containing the drive are evaluated with one-sided limits at the support
//! edges (`t = 0` and `t = t_p` are grid points), so the rectangular
//! discontinuity never leaks quadrature error into the photon budgets.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dicke::TimeSeries;
use crate::model::{mean_input_photons, PulseShape, PulseSpec, SystemConfig};
use crate::regression::TwoTimeGrid;
use crate::{EngineError, Result};

/// Threshold below which the rotated mode amplitudes are considered
/// phase-corrupted (detuned carrier or a bug upstream).
pub const PHASE_LEAK_LIMIT: f64 = 1e-3;

/// `|<c_in>|` below which the gain is reported as undefined instead of 0/0.
const VACUUM_AMPLITUDE: f64 = 1e-9;

/// Append the output-field channels to a recorded trajectory:
/// `<a_out> = E - sqrt(gamma/2) <J_->`,
/// `<a_out^dag a_out> = |E|^2 - sqrt(gamma/2)(E* <J_-> + c.c.) + (gamma/2) <J_+ J_->`,
/// `<b_out^dag b_out> = (gamma/2) <J_+ J_->`.
pub fn output_moments(series: &mut TimeSeries, config: &SystemConfig) {
    let sq = (config.gamma / 2.0).sqrt();
    let half = config.gamma / 2.0;
    let n = series.len();
    series.a_out.resize(n, C64::new(0.0, 0.0));
    series.a_out_flux.resize(n, 0.0);
    series.a_out_coherent.resize(n, 0.0);
    series.b_out_flux.resize(n, 0.0);
    for k in 0..n {
        let e = series.drive[k];
        let jm = series.j_minus[k];
        let a = e - sq * jm;
        series.a_out[k] = a;
        series.a_out_coherent[k] = a.norm_sqr();
        series.a_out_flux[k] =
            e.norm_sqr() - sq * 2.0 * (e.conj() * jm).re + half * series.jpjm[k];
        series.b_out_flux[k] = half * series.jpjm[k];
    }
}

/// Mean photon numbers of the input and output pulses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhotonNumbers {
    /// `∫ |E|^2`.
    pub n_in: f64,
    /// `∫ <a_out^dag a_out>`.
    pub n_a: f64,
    /// `∫ |<a_out>|^2`.
    pub n_ac: f64,
    /// `∫ <b_out^dag b_out>`.
    pub n_b: f64,
    /// `∫ |<b_out>|^2 = (gamma/2) ∫ |<J_->|^2`.
    pub n_bc: f64,
}

/// Trapezoid over the full recorded window with interval-consistent drive
/// values: within each panel the left endpoint uses the right-limit of the
/// drive and the right endpoint its left-limit.
fn integrate_with_drive<F>(series: &TimeSeries, mut integrand: F) -> f64
where
    F: FnMut(usize, C64) -> f64,
{
    let n = series.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut left_value = integrand(0, series.drive[0]);
    for k in 1..n {
        let right_value = integrand(k, series.drive_left[k]);
        acc += 0.5 * (left_value + right_value);
        left_value = integrand(k, series.drive[k]);
    }
    acc * series.dt
}

fn integrate_complex_with_drive<F>(series: &TimeSeries, mut integrand: F) -> C64
where
    F: FnMut(usize, C64) -> C64,
{
    let n = series.len();
    if n < 2 {
        return C64::new(0.0, 0.0);
    }
    let mut acc = C64::new(0.0, 0.0);
    let mut left_value = integrand(0, series.drive[0]);
    for k in 1..n {
        let right_value = integrand(k, series.drive_left[k]);
        acc += 0.5 * (left_value + right_value);
        left_value = integrand(k, series.drive[k]);
    }
    acc * series.dt
}

/// Integrate the photon-number channels over the recorded window.
pub fn photon_numbers(series: &TimeSeries, config: &SystemConfig) -> PhotonNumbers {
    let sq = (config.gamma / 2.0).sqrt();
    let half = config.gamma / 2.0;
    let n_in = integrate_with_drive(series, |_, e| e.norm_sqr());
    let n_a = integrate_with_drive(series, |k, e| {
        e.norm_sqr() - 2.0 * sq * (e.conj() * series.j_minus[k]).re + half * series.jpjm[k]
    });
    let n_ac = integrate_with_drive(series, |k, e| (e - sq * series.j_minus[k]).norm_sqr());
    let n_b = integrate_with_drive(series, |k, _| half * series.jpjm[k]);
    let n_bc = integrate_with_drive(series, |k, _| half * series.j_minus[k].norm_sqr());
    PhotonNumbers { n_in, n_a, n_ac, n_b, n_bc }
}

/// Per-atom photon emission probabilities.
///
/// `P_a` and `P_ac` may be negative when the forward photon number drops
/// below the input (coherent reflection of long pulses).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmissionProbabilities {
    pub p_a: f64,
    pub p_ac: f64,
    pub p_b: f64,
}

pub fn emission_probabilities(
    numbers: &PhotonNumbers,
    config: &SystemConfig,
) -> EmissionProbabilities {
    let n = config.atom_count as f64;
    EmissionProbabilities {
        p_a: (numbers.n_a - numbers.n_in) / n,
        p_ac: (numbers.n_ac - numbers.n_in) / n,
        p_b: numbers.n_b / n,
    }
}

/// Normalized temporal mode on the grid over `[0, t_p]`.
///
/// The output filter is chosen identical to the input mode: a flat profile
/// for the rectangular pulse, the normalized sine envelope for the sine
/// pulse. Values are real in the rotating frame.
#[derive(Clone, Debug)]
pub struct ModeFunction {
    pub dt: f64,
    /// Samples `f(t_k)` for `k = 0..=pulse_steps`.
    pub values: Vec<f64>,
}

impl ModeFunction {
    pub fn matched(pulse: &PulseSpec, dt: f64, pulse_steps: usize) -> Self {
        let tp = pulse.t_p;
        let values = match pulse.shape {
            PulseShape::Rectangular => vec![(1.0 / tp).sqrt(); pulse_steps + 1],
            PulseShape::Sine => (0..=pulse_steps)
                .map(|k| {
                    (2.0 / tp).sqrt() * (std::f64::consts::PI * k as f64 * dt / tp).sin()
                })
                .collect(),
        };
        ModeFunction { dt, values }
    }

    /// Trapezoidal `∫ |f|^2 dt`; 1 to within rounding for matched modes.
    pub fn norm_sqr(&self) -> f64 {
        trapz(&self.values.iter().map(|v| v * v).collect::<Vec<_>>(), self.dt)
    }
}

fn trapz(values: &[f64], dt: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    (inner + 0.5 * (values[0] + values[values.len() - 1])) * dt
}

/// Mode-projected amplitudes of the input and output pulses,
/// `<c> = ∫ f*(t) <a(t)> dt` over the mode support.
pub fn mode_amplitudes(
    series: &TimeSeries,
    mode: &ModeFunction,
    config: &SystemConfig,
) -> Result<(C64, C64)> {
    let kp = mode.values.len() - 1;
    if series.len() <= kp {
        return Err(EngineError::ModeMismatch { needed: kp + 1, available: series.len() });
    }
    let sq = (config.gamma / 2.0).sqrt();
    // Restrict the integral to the mode support by zero weight past kp.
    let c_in = integrate_complex_with_drive(series, |k, e| {
        if k <= kp {
            mode.values[k] * e
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let c_out = integrate_complex_with_drive(series, |k, e| {
        if k <= kp {
            mode.values[k] * (e - sq * series.j_minus[k])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok((c_in, c_out))
}

/// Quadrature fluctuations of the mode-projected output (and the coherent
/// input reference values).
#[derive(Clone, Copy, Debug)]
pub struct QuadratureReport {
    pub c_in: C64,
    pub c_out: C64,
    /// Connected `<c^dag, c>`.
    pub cdag_c: f64,
    /// Connected `<c, c>`.
    pub cc: C64,
    /// Connected `<c^dag, c^dag>`.
    pub cdag_cdag: C64,
    /// `Delta X` of the output pulse; the input value is exactly 1/2.
    pub delta_x: f64,
    /// `Delta Y` of the output pulse.
    pub delta_y: f64,
}

/// Project the output field onto the temporal mode and evaluate the
/// quadrature standard deviations.
///
/// The connected second moments come entirely from the spin correlators:
/// `<c^dag, c> = (gamma/2) ∬ f(t1) f*(t2) C_pm(t1,t2)` and
/// `<c, c> = (gamma/2) ∬ f*(t1) f*(t2) C_mm(t1,t2)`; the drive contributions
/// cancel because the input is coherent. Then
/// `(DX)^2 = (1 + 2<c^dag,c> + <c,c> e^{-2i theta} + c.c.)/4` and `(DY)^2`
/// with the anomalous terms negated.
pub fn project_mode(
    series: &TimeSeries,
    grid2: &TwoTimeGrid,
    mode: &ModeFunction,
    config: &SystemConfig,
) -> Result<QuadratureReport> {
    let kp = mode.values.len() - 1;
    if grid2.points <= kp {
        return Err(EngineError::ModeMismatch { needed: kp + 1, available: grid2.points });
    }
    let (c_in, c_out) = mode_amplitudes(series, mode, config)?;

    // Tensor-product trapezoid weights over the mode support.
    let wf: Vec<f64> = (0..=kp)
        .map(|k| {
            let w = if k == 0 || k == kp { 0.5 } else { 1.0 };
            w * mode.values[k] * grid2.dt
        })
        .collect();

    let half = config.gamma / 2.0;
    let mut cdag_c = C64::new(0.0, 0.0);
    let mut cc = C64::new(0.0, 0.0);
    let mut cdag_cdag = C64::new(0.0, 0.0);
    for k1 in 0..=kp {
        let mut row_pm = C64::new(0.0, 0.0);
        let mut row_mm = C64::new(0.0, 0.0);
        let mut row_pp = C64::new(0.0, 0.0);
        for k2 in 0..=kp {
            row_pm += wf[k2] * grid2.c_pm(k1, k2);
            row_mm += wf[k2] * grid2.c_mm(k1, k2);
            row_pp += wf[k2] * grid2.c_pp(k1, k2);
        }
        cdag_c += wf[k1] * row_pm;
        cc += wf[k1] * row_mm;
        cdag_cdag += wf[k1] * row_pp;
    }
    cdag_c *= half;
    cc *= half;
    cdag_cdag *= half;

    // The anomalous pair enters as cc e^{-2i theta} + cdag_cdag e^{2i theta},
    // which is real up to integration noise for a resonant drive.
    let theta = config.theta;
    let anomalous = cc * C64::from_polar(1.0, -2.0 * theta)
        + cdag_cdag * C64::from_polar(1.0, 2.0 * theta);
    debug_assert!(anomalous.im.abs() < 1e-6 * (1.0 + anomalous.norm()));
    let dx2 = (1.0 + 2.0 * cdag_c.re + anomalous.re) / 4.0;
    let dy2 = (1.0 + 2.0 * cdag_c.re - anomalous.re) / 4.0;

    Ok(QuadratureReport {
        c_in,
        c_out,
        cdag_c: cdag_c.re,
        cc,
        cdag_cdag,
        delta_x: dx2.max(0.0).sqrt(),
        delta_y: dy2.max(0.0).sqrt(),
    })
}

/// Signal gain and intensity signal-to-noise change.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    /// `G = <c_out>^2 / <c_in>^2`, rotated real; `None` for vacuum input.
    pub gain: Option<f64>,
    /// `R_SN = G / (4 (DX)^2)`; requires the quadrature engine.
    pub r_sn: Option<f64>,
}

/// Evaluate `G` (and `R_SN` when `delta_x` is available).
///
/// Both amplitudes are rotated by `e^{-i theta}`; they are real by
/// construction for a resonant drive, and a relative imaginary part beyond
/// [`PHASE_LEAK_LIMIT`] is reported as [`EngineError::PhaseLeak`].
pub fn gain_and_snr(
    c_in: C64,
    c_out: C64,
    delta_x: Option<f64>,
    config: &SystemConfig,
) -> Result<GainReport> {
    if c_in.norm() < VACUUM_AMPLITUDE {
        return Ok(GainReport { gain: None, r_sn: None });
    }
    let rot = C64::from_polar(1.0, -config.theta);
    let rin = c_in * rot;
    let rout = c_out * rot;
    for z in [rin, rout] {
        let leak = z.im.abs() / z.norm().max(f64::MIN_POSITIVE);
        if leak > PHASE_LEAK_LIMIT {
            return Err(EngineError::PhaseLeak(leak));
        }
    }
    let gain = (rout.re * rout.re) / (rin.re * rin.re);
    let r_sn = delta_x.map(|dx| gain / (4.0 * dx * dx));
    Ok(GainReport { gain: Some(gain), r_sn })
}

/// Scalar summary of one simulated configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplifierReport {
    pub n_in: f64,
    pub n_a: f64,
    pub n_ac: f64,
    pub n_b: f64,
    pub n_bc: f64,
    pub p_a: f64,
    pub p_ac: f64,
    pub p_b: f64,
    /// `N_a + N_b - N_in - N`; bounded by 1e-3 for converged runs.
    pub conservation_residual: f64,
    pub gain: Option<f64>,
    pub delta_x: Option<f64>,
    pub delta_y: Option<f64>,
    pub r_sn: Option<f64>,
}

impl AmplifierReport {
    pub fn assemble(
        numbers: &PhotonNumbers,
        probabilities: &EmissionProbabilities,
        gain: &GainReport,
        quadratures: Option<&QuadratureReport>,
        config: &SystemConfig,
    ) -> AmplifierReport {
        AmplifierReport {
            n_in: numbers.n_in,
            n_a: numbers.n_a,
            n_ac: numbers.n_ac,
            n_b: numbers.n_b,
            n_bc: numbers.n_bc,
            p_a: probabilities.p_a,
            p_ac: probabilities.p_ac,
            p_b: probabilities.p_b,
            conservation_residual: numbers.n_a + numbers.n_b
                - numbers.n_in
                - config.atom_count as f64,
            gain: gain.gain,
            delta_x: quadratures.map(|q| q.delta_x),
            delta_y: quadratures.map(|q| q.delta_y),
            r_sn: gain.r_sn,
        }
    }
}

/// Closed-form `N_in` for cross-checking the integrated value.
pub fn analytic_n_in(pulse: &PulseSpec, config: &SystemConfig) -> f64 {
    mean_input_photons(pulse, config)
}
