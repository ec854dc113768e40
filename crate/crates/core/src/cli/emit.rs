//! CSV, JSON and SVG artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::report::{Artifact, RunReport};
use crate::synth::LambdaPoles;
use crate::{Error, Result};

pub const CLOSED_LOOP_CSV: &str = "poles.csv";
pub const OPEN_LOOP_CSV: &str = "open_loop_poles.csv";
pub const CLOSED_LOOP_SVG: &str = "poles.svg";
pub const OPEN_LOOP_SVG: &str = "open_loop_poles.svg";
pub const REPORT_JSON: &str = "report.json";

/// Output kinds selected with `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats { csv: true, json: true, svg: true }
    }
}

impl Formats {
    /// Comma-separated subset of `csv`, `json`, `svg`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut f = Formats { csv: false, json: false, svg: false };
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(Error::Config(format!("format: unknown output kind '{other}'"))),
            }
        }
        Ok(f)
    }
}

/// One row of a pole table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleRow {
    pub lambda: f64,
    pub re_s: f64,
    pub im_s: f64,
    pub re_z: f64,
    pub im_z: f64,
    pub stable: bool,
}

pub fn pole_rows(table: &[LambdaPoles]) -> Vec<PoleRow> {
    table
        .iter()
        .flat_map(|lp| {
            lp.poles.iter().zip(&lp.mapped).map(move |(s, z)| PoleRow {
                lambda: lp.lambda,
                re_s: s.re,
                im_s: s.im,
                re_z: z.re,
                im_z: z.im,
                stable: lp.stable,
            })
        })
        .collect()
}

const HEADER: [&str; 6] = ["lambda", "re_s", "im_s", "re_z", "im_z", "stable"];

pub fn csv_bytes(rows: &[PoleRow]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn read_csv(path: &Path) -> Result<Vec<PoleRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

const SIZE: f64 = 800.0;

/// `lambda = 0` blue through `lambda = 1` red.
fn ramp(lambda: f64) -> String {
    let t = lambda.clamp(0.0, 1.0);
    format!("rgb({},{},{})", (255.0 * t).round(), 60, (255.0 * (1.0 - t)).round())
}

/// Scatter of the mapped poles with the unit circle; one group per `lambda`.
pub fn svg(table: &[LambdaPoles], title: &str) -> String {
    let reach = table
        .iter()
        .flat_map(|lp| lp.mapped.iter())
        .map(|z| z.re.abs().max(z.im.abs()))
        .filter(|x| x.is_finite())
        .fold(1.0, f64::max);
    let extent = (1.1 * reach).min(5.0);
    let scale = SIZE / (2.0 * extent);
    let c = SIZE / 2.0;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#);
    let _ = writeln!(out, "<title>{title}</title>");
    let _ = writeln!(out, r#"<rect width="800" height="800" fill="white"/>"#);
    let _ = writeln!(out, r##"<line x1="0" y1="400" x2="800" y2="400" stroke="#bbbbbb" stroke-width="1"/>"##);
    let _ = writeln!(out, r##"<line x1="400" y1="0" x2="400" y2="800" stroke="#bbbbbb" stroke-width="1"/>"##);
    let _ =
        writeln!(out, r#"<circle cx="400" cy="400" r="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#, scale);
    for lp in table {
        if lp.mapped.is_empty() {
            continue;
        }
        let _ = writeln!(out, r#"<g data-lambda="{}" fill="{}">"#, lp.lambda, ramp(lp.lambda));
        for z in &lp.mapped {
            let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="4"/>"#, c + scale * z.re, c - scale * z.im);
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write(dir: &Path, name: &str, bytes: &[u8], log: &mut Vec<Artifact>) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, bytes)?;
    log.push(Artifact { file: name.to_string(), sha256: sha256_hex(bytes) });
    Ok(path)
}

pub fn report_json(report: &RunReport) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(report)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the selected artifacts into `dir` and records them in
/// `report.artifacts`; the JSON report is written last and lists the others.
pub fn emit(report: &mut RunReport, dir: &Path, formats: Formats) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut log = Vec::new();
    let mut paths = Vec::new();
    if let Some(sy) = &report.synthesis {
        let sweep = &sy.sweep;
        if formats.csv {
            paths.push(write(dir, CLOSED_LOOP_CSV, &csv_bytes(&pole_rows(&sweep.closed_loop))?, &mut log)?);
            paths.push(write(dir, OPEN_LOOP_CSV, &csv_bytes(&pole_rows(&sweep.open_loop))?, &mut log)?);
        }
        if formats.svg {
            let closed = svg(&sweep.closed_loop, "closed-loop poles, z = (1 + s)/(1 - s)");
            let open = svg(&sweep.open_loop, "open-loop poles, z = (1 + s)/(1 - s)");
            paths.push(write(dir, CLOSED_LOOP_SVG, closed.as_bytes(), &mut log)?);
            paths.push(write(dir, OPEN_LOOP_SVG, open.as_bytes(), &mut log)?);
        }
    }
    report.artifacts = log;
    if formats.json {
        let path = dir.join(REPORT_JSON);
        fs::write(&path, report_json(report)?)?;
        paths.push(path);
    }
    Ok(paths)
}
