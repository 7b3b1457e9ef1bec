//! One-point function engine on the Dicke ladder.
//!
//! The state is the `(N+1) x (N+1)` matrix `s_{mm'} = <tau_{m,m'}>` of
//! rotating-frame expectation values of the ladder projectors
//! `tau_{m,m'} = |m><m'|`, with `m` the number of excited atoms. The
//! generator couples each entry to at most six neighbours (damping/detuning,
//! one feeding term, four drive terms), so it is applied as explicit index
//! loops instead of a materialized superoperator.

use num_complex::Complex64 as C64;

use crate::model::{PulseSpec, SystemConfig};
use crate::{EngineError, Result};

/// Dense complex matrix on the Dicke ladder, row-major `(N+1) x (N+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DickeMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DickeMatrix {
    pub fn zeros(atom_count: usize) -> Self {
        let dim = atom_count + 1;
        DickeMatrix { n: atom_count, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    /// `|m><m|` basis projector.
    pub fn projector(atom_count: usize, m: usize) -> Self {
        let mut s = Self::zeros(atom_count);
        s[(m, m)] = C64::new(1.0, 0.0);
        s
    }

    pub fn atom_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    #[inline]
    fn idx(&self, m: usize, mp: usize) -> usize {
        m * (self.n + 1) + mp
    }

    pub fn trace(&self) -> C64 {
        (0..=self.n).map(|m| self[(m, m)]).sum()
    }

    /// Largest deviation from Hermitian symmetry, `max |s_{mm'} - conj(s_{m'm})|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut err = 0.0f64;
        for m in 0..=self.n {
            for mp in m..=self.n {
                err = err.max((self[(m, mp)] - self[(mp, m)].conj()).norm());
            }
        }
        err
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }
}

impl std::ops::Index<(usize, usize)> for DickeMatrix {
    type Output = C64;
    fn index(&self, (m, mp): (usize, usize)) -> &C64 {
        &self.data[m * (self.n + 1) + mp]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DickeMatrix {
    fn index_mut(&mut self, (m, mp): (usize, usize)) -> &mut C64 {
        let i = self.idx(m, mp);
        &mut self.data[i]
    }
}

/// Collective-spin state at one instant.
#[derive(Clone, Debug)]
pub struct CollectiveState {
    pub t: f64,
    pub s: DickeMatrix,
}

impl CollectiveState {
    /// All atoms excited, `s = |N><N|`.
    pub fn all_excited(atom_count: usize) -> Self {
        CollectiveState { t: 0.0, s: DickeMatrix::projector(atom_count, atom_count) }
    }

    /// All atoms in the ground state, `s = |0><0|`.
    pub fn ground(atom_count: usize) -> Self {
        CollectiveState { t: 0.0, s: DickeMatrix::projector(atom_count, 0) }
    }

    /// `<J_-> = sum_m w_m s_{m-1,m}` with `w_m = sqrt(m (N-m+1))`.
    pub fn expect_j_minus(&self) -> C64 {
        let n = self.s.n;
        (1..=n)
            .map(|m| ladder_weight(n, m) * self.s[(m - 1, m)])
            .sum()
    }

    /// `<J_+ J_-> = sum_m m (N-m+1) s_{mm}` (real for physical states).
    pub fn expect_jpjm(&self) -> f64 {
        let n = self.s.n;
        (1..=n)
            .map(|m| (m * (n - m + 1)) as f64 * self.s[(m, m)].re)
            .sum()
    }

    /// `<J_z> = sum_m (m - N/2) s_{mm}`.
    pub fn expect_jz(&self) -> f64 {
        let n = self.s.n;
        (0..=n)
            .map(|m| (m as f64 - n as f64 / 2.0) * self.s[(m, m)].re)
            .sum()
    }

    /// Expected number of excited atoms, `<J_z> + N/2`.
    pub fn excitation(&self) -> f64 {
        let n = self.s.n;
        (0..=n).map(|m| m as f64 * self.s[(m, m)].re).sum()
    }

    /// Check the trace / Hermiticity / diagonal-positivity invariants.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.s.n;
        let tr = self.s.trace();
        if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-6 {
            return Err(EngineError::InvalidConfig(format!(
                "state trace {tr} deviates from 1"
            )));
        }
        if self.s.hermiticity_error() > 1e-9 {
            return Err(EngineError::InvalidConfig("state is not Hermitian".into()));
        }
        for m in 0..=n {
            let d = self.s[(m, m)];
            if d.re < -1e-8 || d.re > 1.0 + 1e-8 || d.im.abs() > 1e-9 {
                return Err(EngineError::InvalidConfig(format!(
                    "diagonal entry s_{{{m}{m}}} = {d} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Ladder matrix element `w_k = sqrt(k (N-k+1))`; zero outside `1..=N`.
#[inline]
pub fn ladder_weight(atom_count: usize, k: usize) -> f64 {
    if k == 0 || k > atom_count {
        0.0
    } else {
        ((k * (atom_count - k + 1)) as f64).sqrt()
    }
}

/// Precomputed generator coefficients that do not depend on the drive.
#[derive(Clone, Debug)]
pub struct Generator {
    n: usize,
    gamma: f64,
    detuning: f64,
    /// `w[k] = sqrt(k (N-k+1))`, padded with `w[0] = w[N+1] = 0`.
    w: Vec<f64>,
    /// `lambda[m] = m (N-m+1)`.
    lambda: Vec<f64>,
}

impl Generator {
    pub fn new(config: &SystemConfig) -> Self {
        let n = config.atom_count;
        let w = (0..=n + 1).map(|k| ladder_weight(n, k)).collect();
        let lambda = (0..=n).map(|m| (m * (n - m + 1)) as f64).collect();
        Generator { n, gamma: config.gamma, detuning: config.detuning * config.gamma, w, lambda }
    }

    pub fn atom_count(&self) -> usize {
        self.n
    }

    /// Writes `ds/dt` for the drive amplitude `drive` into `out`.
    ///
    /// Exactly six coefficient families couple into `(m, m')`:
    /// damping/detuning from `(m, m')`, feeding from `(m+1, m'+1)`, and four
    /// drive terms from `(m∓1, m')` and `(m, m'∓1)`. Terms whose source index
    /// leaves `0..=N` are absent.
    pub fn apply(&self, s: &[C64], drive: C64, out: &mut [C64]) {
        let n = self.n;
        let dim = n + 1;
        debug_assert_eq!(s.len(), dim * dim);
        debug_assert_eq!(out.len(), dim * dim);

        let g = self.gamma;
        let sq = (g / 2.0).sqrt();
        let e = drive;
        let ec = drive.conj();
        let i = C64::new(0.0, 1.0);

        for m in 0..dim {
            let row = m * dim;
            let row_up = row + dim; // (m+1, .)
            let row_dn = row.wrapping_sub(dim); // (m-1, .)
            for mp in 0..dim {
                let diag = (i * (self.detuning * (m as f64 - mp as f64))
                    - 0.5 * g * (self.lambda[m] + self.lambda[mp]))
                    * s[row + mp];
                let mut acc = diag;
                if m < n && mp < n {
                    acc += g * self.w[m + 1] * self.w[mp + 1] * s[row_up + mp + 1];
                }
                if m >= 1 {
                    acc += sq * ec * self.w[m] * s[row_dn + mp];
                }
                if mp < n {
                    acc -= sq * ec * self.w[mp + 1] * s[row + mp + 1];
                }
                if m < n {
                    acc -= sq * e * self.w[m + 1] * s[row_up + mp];
                }
                if mp >= 1 {
                    acc += sq * e * self.w[mp] * s[row + mp - 1];
                }
                out[row + mp] = acc;
            }
        }
    }
}

/// Time derivative of the one-point matrix for drive amplitude `E(t)`.
pub fn apply_generator(state: &CollectiveState, drive: C64, config: &SystemConfig) -> DickeMatrix {
    let gen = Generator::new(config);
    let mut out = DickeMatrix::zeros(config.atom_count);
    gen.apply(state.s.as_slice(), drive, out.as_mut_slice());
    out
}

/// Uniform integration grid. `dt` is snapped so that `t_p` falls exactly on
/// a grid point; `t_end` is the earliest time at which the run may stop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub dt: f64,
    pub t_end: f64,
    /// Index of the grid point sitting exactly at `t_p`.
    pub pulse_steps: usize,
}

impl Grid {
    /// Largest admissible step: the drive must be resolved by at least 2000
    /// steps across the pulse and 500 steps per atomic lifetime.
    pub fn max_dt(pulse: &PulseSpec, config: &SystemConfig) -> f64 {
        (pulse.t_p / 2000.0).min(0.002 / config.gamma)
    }

    /// Default grid for a pulse: the coarsest admissible `dt`, aligned to
    /// `t_p`, with `t_end = t_p` (the run extends itself past `t_end` until
    /// the atoms have decayed).
    pub fn for_pulse(pulse: &PulseSpec, config: &SystemConfig) -> Grid {
        Self::with_dt(pulse, config, Self::max_dt(pulse, config))
            .expect("default grid is always admissible")
    }

    /// Grid with a requested step, snapped down so `t_p` is a grid point.
    pub fn with_dt(pulse: &PulseSpec, config: &SystemConfig, dt: f64) -> Result<Grid> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(EngineError::InvalidGrid("dt must be finite and > 0".into()));
        }
        let max = Self::max_dt(pulse, config);
        if dt > max * (1.0 + 1e-9) {
            return Err(EngineError::InvalidGrid(format!(
                "dt = {dt:.3e} does not resolve the drive; need dt <= {max:.3e}"
            )));
        }
        let pulse_steps = (pulse.t_p / dt).ceil() as usize;
        let dt = pulse.t_p / pulse_steps as f64;
        Ok(Grid { dt, t_end: pulse.t_p, pulse_steps })
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }
}

/// Drive samples for one RK4 step, with one-sided limits at the ends.
///
/// A step `k -> k+1` lies entirely inside the pulse iff `k < pulse_steps`,
/// because `t_p` is pinned to grid index `pulse_steps`. Evaluating the
/// envelope this way (instead of by floating comparisons against `t_p`)
/// keeps the integrator exactly fourth-order across the rectangular edges.
#[derive(Clone, Debug)]
pub(crate) struct GridDrive {
    pulse: PulseSpec,
    config: SystemConfig,
    dt: f64,
    pulse_steps: usize,
}

impl GridDrive {
    pub fn new(pulse: &PulseSpec, config: &SystemConfig, grid: &Grid) -> Self {
        GridDrive { pulse: *pulse, config: *config, dt: grid.dt, pulse_steps: grid.pulse_steps }
    }

    #[inline]
    fn in_pulse_value(&self, t: f64) -> C64 {
        self.pulse.envelope_unclamped(&self.config, t)
    }

    /// `(E(t_k^+), E(t_k + dt/2), E(t_{k+1}^-))` for step `k`.
    pub fn step_samples(&self, k: usize) -> (C64, C64, C64) {
        if k < self.pulse_steps {
            let t0 = k as f64 * self.dt;
            (
                self.in_pulse_value(t0),
                self.in_pulse_value(t0 + 0.5 * self.dt),
                self.in_pulse_value(t0 + self.dt),
            )
        } else {
            let zero = C64::new(0.0, 0.0);
            (zero, zero, zero)
        }
    }

    /// Right-limit value at grid point `k` (equals `envelope(t_k)`).
    pub fn value_right(&self, k: usize) -> C64 {
        if k < self.pulse_steps {
            self.in_pulse_value(k as f64 * self.dt)
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// Left-limit value at grid point `k`.
    pub fn value_left(&self, k: usize) -> C64 {
        if k >= 1 && k <= self.pulse_steps {
            self.in_pulse_value(k as f64 * self.dt)
        } else {
            C64::new(0.0, 0.0)
        }
    }
}

/// Scratch buffers for classic fixed-step RK4 on a ladder matrix.
pub(crate) struct Rk4Scratch {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Rk4Scratch {
    pub fn new(dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim * dim];
        Rk4Scratch { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    /// Advance `s` by one step of size `dt`, with drive samples at the start,
    /// midpoint and end of the step.
    pub fn step(
        &mut self,
        gen: &Generator,
        s: &mut [C64],
        dt: f64,
        drive: (C64, C64, C64),
    ) {
        let (e0, em, e1) = drive;
        gen.apply(s, e0, &mut self.k1);
        axpy(&mut self.tmp, s, &self.k1, 0.5 * dt);
        gen.apply(&self.tmp, em, &mut self.k2);
        axpy(&mut self.tmp, s, &self.k2, 0.5 * dt);
        gen.apply(&self.tmp, em, &mut self.k3);
        axpy(&mut self.tmp, s, &self.k3, dt);
        gen.apply(&self.tmp, e1, &mut self.k4);
        let w = dt / 6.0;
        for i in 0..s.len() {
            s[i] += w * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }
}

#[inline]
fn axpy(out: &mut [C64], s: &[C64], k: &[C64], h: f64) {
    for i in 0..s.len() {
        out[i] = s[i] + h * k[i];
    }
}

/// Uniform-grid record of the drive and collective-spin expectations, with
/// output-field channels appended by the metrics module.
#[derive(Clone, Debug, Default)]
pub struct TimeSeries {
    pub dt: f64,
    /// Grid index of `t_p`.
    pub pulse_steps: usize,
    pub t: Vec<f64>,
    /// Drive amplitude at each grid point (right-limit, i.e. `envelope(t_k)`).
    pub drive: Vec<C64>,
    /// Left-limit of the drive at each grid point; differs from `drive` only
    /// at the support edges and is what integrals across `t_p` must use.
    pub drive_left: Vec<C64>,
    pub j_minus: Vec<C64>,
    pub jz: Vec<f64>,
    pub jpjm: Vec<f64>,
    /// `<a_out>` (filled by metrics).
    pub a_out: Vec<C64>,
    /// `<a_out^dag a_out>` (filled by metrics).
    pub a_out_flux: Vec<f64>,
    /// `|<a_out>|^2` (filled by metrics).
    pub a_out_coherent: Vec<f64>,
    /// `<b_out^dag b_out>` (filled by metrics).
    pub b_out_flux: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Full output of [`evolve`]: the recorded channels, the final state, and the
/// state snapshots over the pulse window needed by the two-time engine.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub series: TimeSeries,
    pub final_state: CollectiveState,
    /// `s(t_k)` for `k = 0..=pulse_steps` (the mode-function support).
    pub pulse_window_states: Vec<DickeMatrix>,
}

/// Tolerated trace drift per step before flagging `StepTooLarge`.
pub const TRACE_TOLERANCE: f64 = 1e-4;
/// Residual excitation (per atom count) below which the run may stop.
pub const EXCITATION_RESIDUAL: f64 = 1e-6;
/// Longest extension past `t_p`, in atomic lifetimes.
pub const MAX_TAIL: f64 = 50.0;

/// Integrate the one-point system from `s(0) = |N><N|` (all atoms excited).
///
/// Classic fixed-step RK4 on the grid; channels are recorded at every grid
/// point. The run continues past `grid.t_end` until the residual excitation
/// `<J_z> + N/2` drops below `1e-6 N` or `t` reaches `t_p + 50/gamma`,
/// whichever comes first.
pub fn evolve(config: &SystemConfig, pulse: &PulseSpec, grid: &Grid) -> Result<Evolution> {
    config.validate()?;
    pulse.validate()?;
    if grid.t_end < pulse.t_p {
        return Err(EngineError::InvalidGrid("t_end must be >= t_p".into()));
    }
    let max = Grid::max_dt(pulse, config);
    if grid.dt > max * (1.0 + 1e-9) {
        return Err(EngineError::InvalidGrid(format!(
            "dt = {:.3e} does not resolve the drive; need dt <= {max:.3e}",
            grid.dt
        )));
    }

    let n = config.atom_count;
    let gen = Generator::new(config);
    let drive = GridDrive::new(pulse, config, grid);
    let mut scratch = Rk4Scratch::new(n + 1);

    let mut state = CollectiveState::all_excited(n);
    let hard_stop = pulse.t_p + MAX_TAIL / config.gamma;
    let residual_limit = EXCITATION_RESIDUAL * n as f64;

    let mut series = TimeSeries {
        dt: grid.dt,
        pulse_steps: grid.pulse_steps,
        ..TimeSeries::default()
    };
    let mut window_states = Vec::with_capacity(grid.pulse_steps + 1);

    let mut k = 0usize;
    loop {
        let t = k as f64 * grid.dt;
        state.t = t;
        series.t.push(t);
        series.drive.push(drive.value_right(k));
        series.drive_left.push(drive.value_left(k));
        series.j_minus.push(state.expect_j_minus());
        series.jz.push(state.expect_jz());
        series.jpjm.push(state.expect_jpjm());
        if k <= grid.pulse_steps {
            window_states.push(state.s.clone());
        }

        let done_by_residual = t >= grid.t_end - 0.5 * grid.dt
            && state.excitation() < residual_limit;
        let done_by_tail = t >= hard_stop - 0.5 * grid.dt;
        if (done_by_residual || done_by_tail) && k >= grid.pulse_steps {
            break;
        }

        scratch.step(&gen, state.s.as_mut_slice(), grid.dt, drive.step_samples(k));
        k += 1;

        let tr = state.s.trace();
        let dev = (tr.re - 1.0).hypot(tr.im);
        if dev > TRACE_TOLERANCE {
            return Err(EngineError::StepTooLarge {
                t: k as f64 * grid.dt,
                deviation: dev,
                limit: TRACE_TOLERANCE,
            });
        }
    }

    Ok(Evolution { series, final_state: state, pulse_window_states: window_states })
}
