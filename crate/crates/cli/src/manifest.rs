//! Run manifests: the full parameter record every output file references.
//!
//! Reruns with identical manifests produce bit-identical numeric output; the
//! wall clock lives only here, never in the CSV/JSON payloads.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::args::ResolvedPoint;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifestParameters {
    pub atoms: usize,
    pub shape: String,
    pub area_pi: f64,
    pub tp: f64,
    pub theta: f64,
    pub gamma: f64,
    pub detuning: f64,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub quadratures: bool,
}

impl ManifestParameters {
    pub fn from_point(p: &ResolvedPoint) -> Self {
        ManifestParameters {
            atoms: p.atoms,
            shape: match p.shape {
                superfluence::model::PulseShape::Rectangular => "rect".to_string(),
                superfluence::model::PulseShape::Sine => "sine".to_string(),
            },
            area_pi: p.area_pi,
            tp: p.tp,
            theta: p.theta,
            gamma: p.gamma,
            detuning: p.detuning,
            dt: p.dt,
            t_end: p.t_end,
            quadratures: p.quadratures,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SweepSettings {
    pub axis: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub log: bool,
    pub fixed_n_in: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub parameters: ManifestParameters,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSettings>,
    /// Resolved grid of the run (filled for `run`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_pulse_steps: Option<usize>,
    pub code_version: String,
    /// Seconds since the Unix epoch at invocation; informational only.
    pub wall_clock_unix: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: ManifestParameters) -> Self {
        RunManifest {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters,
            sweep: None,
            grid_dt: None,
            grid_pulse_steps: None,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialization");
        text.push('\n');
        std::fs::write(path, text)
    }

    pub fn read(path: &Path) -> std::io::Result<Option<RunManifest>> {
        match std::fs::read_to_string(path) {
            Ok(text) => Ok(serde_json::from_str(&text).ok()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Two manifests describe the same computation when everything except
    /// the wall clock and output list matches.
    pub fn same_computation(&self, other: &RunManifest) -> bool {
        self.schema_version == other.schema_version
            && self.command == other.command
            && self.parameters == other.parameters
            && self.sweep == other.sweep
            && self.code_version == other.code_version
    }
}
