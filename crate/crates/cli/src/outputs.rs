//! Deterministic CSV and JSON writers.
//!
//! Numbers are written in scientific notation with 17 significant digits
//! ('.' decimal), so identical bits always produce identical bytes.

use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Serialize;
use superfluence::driver::SimulationRun;
use superfluence::metrics::AmplifierReport;

use crate::manifest::ManifestParameters;

pub fn fmt(x: f64) -> String {
    format!("{:.16e}", x)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

pub const SERIES_HEADER: &str = "t,re_drive,im_drive,re_j_minus,im_j_minus,jz,jpjm,\
re_a_out,im_a_out,a_out_flux,a_out_coherent,b_out_flux";

/// Write the recorded time series, referencing the manifest in a leading
/// comment line.
pub fn write_series_csv(
    path: &Path,
    manifest_name: &str,
    run: &SimulationRun,
) -> io::Result<()> {
    let series = &run.series;
    let mut w = io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# manifest: {manifest_name}")?;
    writeln!(w, "{SERIES_HEADER}")?;
    for k in 0..series.len() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(series.t[k]),
            fmt(series.drive[k].re),
            fmt(series.drive[k].im),
            fmt(series.j_minus[k].re),
            fmt(series.j_minus[k].im),
            fmt(series.jz[k]),
            fmt(series.jpjm[k]),
            fmt(series.a_out[k].re),
            fmt(series.a_out[k].im),
            fmt(series.a_out_flux[k]),
            fmt(series.a_out_coherent[k]),
            fmt(series.b_out_flux[k]),
        )?;
    }
    w.flush()
}

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct QuadratureJson {
    c_in: ComplexJson,
    c_out: ComplexJson,
    cdag_c: f64,
    cc: ComplexJson,
    cdag_cdag: ComplexJson,
    delta_x: f64,
    delta_y: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    manifest: &'a str,
    parameters: &'a ManifestParameters,
    report: &'a AmplifierReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadratures: Option<QuadratureJson>,
}

pub fn write_report_json(
    path: &Path,
    manifest_name: &str,
    parameters: &ManifestParameters,
    run: &SimulationRun,
) -> io::Result<()> {
    let payload = ReportJson {
        manifest: manifest_name,
        parameters,
        report: &run.report,
        quadratures: run.quadratures.as_ref().map(|q| QuadratureJson {
            c_in: q.c_in.into(),
            c_out: q.c_out.into(),
            cdag_c: q.cdag_c,
            cc: q.cc.into(),
            cdag_cdag: q.cdag_cdag.into(),
            delta_x: q.delta_x,
            delta_y: q.delta_y,
        }),
    };
    let mut text = serde_json::to_string_pretty(&payload).expect("report serialization");
    text.push('\n');
    std::fs::write(path, text)
}

/// Fixed sweep schema; never reorder without bumping the manifest schema.
pub const SWEEP_HEADER: &str = "axis_value,atoms,shape,area_pi,tp,theta,gamma,\
n_in,n_a,n_ac,n_b,n_bc,p_a,p_ac,p_b,conservation_residual,gain,delta_x,delta_y,r_sn";

pub struct SweepRow {
    pub axis_value: f64,
    pub atoms: usize,
    pub shape: &'static str,
    pub area_pi: f64,
    pub tp: f64,
    pub theta: f64,
    pub gamma: f64,
    pub report: AmplifierReport,
}

pub fn format_sweep_row(row: &SweepRow) -> String {
    let r = &row.report;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        fmt(row.axis_value),
        row.atoms,
        row.shape,
        fmt(row.area_pi),
        fmt(row.tp),
        fmt(row.theta),
        fmt(row.gamma),
        fmt(r.n_in),
        fmt(r.n_a),
        fmt(r.n_ac),
        fmt(r.n_b),
        fmt(r.n_bc),
        fmt(r.p_a),
        fmt(r.p_ac),
        fmt(r.p_b),
        fmt(r.conservation_residual),
        fmt_opt(r.gain),
        fmt_opt(r.delta_x),
        fmt_opt(r.delta_y),
        fmt_opt(r.r_sn),
    )
}
