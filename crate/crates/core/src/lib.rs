//! Simulation of stimulated emission from `N` superradiant two-level atoms
//! coupled to an infinite 1-D waveguide and driven by a coherent-state pulse.
//!
//! The collective spin lives on the Dicke ladder `|m⟩` (`m` = number of
//! excited atoms, `0..=N`). All dynamics are integrated in the frame rotating
//! at the pulse carrier, so only the slowly varying drive envelope enters the
//! equations of motion. The crate is organized as
//!
//! * [`model`] — system/pulse configuration and drive envelopes,
//! * [`dicke`] — the one-point function engine (density matrix on the ladder),
//! * [`regression`] — two-time correlation functions via quantum regression,
//! * [`metrics`] — output-field moments, photon numbers, emission
//!   probabilities, mode-matched quadratures, gain and signal-to-noise,
//! * [`oracles`] — closed-form references used to validate the engines,
//! * [`driver`] — a one-call "simulate this configuration" front end.
//!
//! Time is measured in units of `1/gamma` and rates in units of `gamma`
//! throughout; `gamma` defaults to 1.

pub mod dicke;
pub mod driver;
pub mod metrics;
pub mod model;
pub mod oracles;
pub mod regression;
pub mod tolerances;

pub use num_complex::Complex64 as C64;

use thiserror::Error;

/// Errors surfaced by the simulation engines.
#[derive(Debug, Error)]
pub enum EngineError {
    /// Configuration or pulse parameters violate an invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// The requested step size does not resolve the drive dynamics.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    /// Post-step trace left the unit-trace band; the step under-resolves the
    /// Rabi dynamics and the caller must shrink `dt`.
    #[error("step too large: trace deviation {deviation:.3e} at t = {t:.6} exceeds {limit:.1e}")]
    StepTooLarge { t: f64, deviation: f64, limit: f64 },
    /// A mode function extends past the assembled two-time window.
    #[error("mode mismatch: mode support needs {needed} grid points, two-time grid has {available}")]
    ModeMismatch { needed: usize, available: usize },
    /// The phase-rotated mode amplitudes were not real; detuned carrier or a
    /// corrupted trajectory.
    #[error("phase leak: rotated amplitude has relative imaginary part {0:.3e}")]
    PhaseLeak(f64),
    /// The semiclassical change of variables left its validity region
    /// (`r^2 <= 0`).
    #[error("singular amplitude: r^2 = {0:.6e} <= 0 reached at t = {1:.6}")]
    SingularAmplitude(f64, f64),
}

pub type Result<T> = std::result::Result<T, EngineError>;
