//! Flag definitions and the flat key=value config-file merge.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use superfluence::model::{PulseShape, PulseSpec, SystemConfig};

#[derive(Parser, Debug)]
#[command(
    name = "superfluence",
    about = "Stimulated emission of superradiant atoms in a 1-D waveguide",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate one parameter point; writes a time-series CSV and a report JSON.
    Run(RunArgs),
    /// Sweep one axis; writes a long-format CSV, one row per point.
    Sweep(SweepArgs),
    /// Run an engine/oracle comparison; exits 4 on tolerance failure.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Rect,
    Sine,
}

impl From<ShapeArg> for PulseShape {
    fn from(s: ShapeArg) -> PulseShape {
        match s {
            ShapeArg::Rect => PulseShape::Rectangular,
            ShapeArg::Sine => PulseShape::Sine,
        }
    }
}

/// Parameters of a single simulation point. Every flag mirrors a key in the
/// optional config file; explicit flags win over the file.
#[derive(Args, Clone, Debug, Default)]
pub struct PointArgs {
    /// Number of atoms.
    #[arg(long)]
    pub atoms: Option<usize>,
    /// Pulse envelope shape.
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    /// Pulse area in units of pi.
    #[arg(long = "area-pi")]
    pub area_pi: Option<f64>,
    /// Pulse duration in units of 1/gamma.
    #[arg(long)]
    pub tp: Option<f64>,
    /// Input pulse phase in radians.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Radiative decay rate (sets the time unit; outputs only rescale).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Atom-carrier detuning in units of gamma.
    #[arg(long)]
    pub detuning: Option<f64>,
    /// Integration step override (snapped so t_p stays on the grid).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Earliest stopping time; the run still self-extends until the atoms
    /// have decayed.
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Also run the two-time correlation engine (expensive) and fill the
    /// quadrature fields.
    #[arg(long)]
    pub quadratures: bool,
    /// Flat key=value config file mirroring these flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Output prefix: writes <out>.csv, <out>.report.json, <out>.manifest.json.
    #[arg(long, default_value = "run")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    Tp,
    Area,
    Atoms,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Swept parameter.
    #[arg(long, value_enum)]
    pub axis: SweepAxis,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub points: usize,
    /// Logarithmic spacing instead of linear.
    #[arg(long)]
    pub log: bool,
    /// Hold N_in fixed by adjusting t_p while sweeping the area
    /// (reproduces the area-dependence figure).
    #[arg(long = "fixed-n-in")]
    pub fixed_n_in: Option<f64>,
    /// Output prefix: writes <out>.csv and <out>.manifest.json.
    #[arg(long, default_value = "sweep")]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    ShortPulse,
    LongPulse,
    SingleAtom,
    Pacs,
    Jc,
    Semiclassical,
    DeltaY,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Which engine/oracle comparison to run.
    #[arg(long, value_enum)]
    pub which: OracleKind,
    /// Optional output file for the comparison JSON (always printed too).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A fully resolved parameter point (flags merged over config over defaults).
#[derive(Clone, Copy, Debug)]
pub struct ResolvedPoint {
    pub atoms: usize,
    pub shape: PulseShape,
    pub area_pi: f64,
    pub tp: f64,
    pub theta: f64,
    pub gamma: f64,
    pub detuning: f64,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub quadratures: bool,
}

impl ResolvedPoint {
    pub fn system_config(&self) -> superfluence::Result<SystemConfig> {
        Ok(SystemConfig::new(self.atoms, self.gamma)?
            .with_theta(self.theta)
            .with_detuning(self.detuning))
    }

    pub fn pulse(&self) -> superfluence::Result<PulseSpec> {
        PulseSpec::new(self.shape, self.tp, self.area_pi * std::f64::consts::PI, self.theta)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ArgError {
    #[error("config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config file line {0}: expected key=value, got `{1}`")]
    Malformed(usize, String),
    #[error("config key `{0}`: invalid value `{1}`")]
    BadValue(String, String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, ArgError> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ArgError::Malformed(lineno + 1, line.to_string()))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn take_parsed<T: std::str::FromStr>(
    map: &mut HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, ArgError> {
    match map.remove(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| ArgError::BadValue(key.to_string(), v)),
    }
}

impl PointArgs {
    /// Merge flags over the config file over the built-in defaults.
    pub fn resolve(&self) -> Result<ResolvedPoint, ArgError> {
        let mut file = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        };
        let shape_file: Option<ShapeArg> = match file.remove("shape") {
            None => None,
            Some(v) => match v.as_str() {
                "rect" => Some(ShapeArg::Rect),
                "sine" => Some(ShapeArg::Sine),
                _ => return Err(ArgError::BadValue("shape".into(), v)),
            },
        };
        let point = ResolvedPoint {
            atoms: self.atoms.or(take_parsed(&mut file, "atoms")?).unwrap_or(10),
            shape: self.shape.or(shape_file).map(PulseShape::from).unwrap_or(PulseShape::Rectangular),
            area_pi: self.area_pi.or(take_parsed(&mut file, "area-pi")?).unwrap_or(1.0),
            tp: self.tp.or(take_parsed(&mut file, "tp")?).unwrap_or(0.2),
            theta: self.theta.or(take_parsed(&mut file, "theta")?).unwrap_or(0.0),
            gamma: self.gamma.or(take_parsed(&mut file, "gamma")?).unwrap_or(1.0),
            detuning: self.detuning.or(take_parsed(&mut file, "detuning")?).unwrap_or(0.0),
            dt: self.dt.or(take_parsed(&mut file, "dt")?),
            t_end: self.t_end.or(take_parsed(&mut file, "t-end")?),
            quadratures: self.quadratures
                || take_parsed::<bool>(&mut file, "quadratures")?.unwrap_or(false),
        };
        if let Some(key) = file.keys().next() {
            return Err(ArgError::UnknownKey(key.clone()));
        }
        Ok(point)
    }
}
