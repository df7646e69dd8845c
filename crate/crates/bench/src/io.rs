//! CSV and JSON readers and writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{de::DeserializeOwned, Serialize};
use wec_core::hydro::HydroTable;
use wec_core::signals::Spectrum;
use wec_core::sim::Trajectory;
use wec_core::TimeSeries;

pub const ELEVATION_HEADER: [&str; 2] = ["time_s", "elevation_m"];
pub const FORCE_HEADER: [&str; 2] = ["time_s", "force_n"];
pub const TRACK_HEADER: [&str; 2] = ["time_s", "omega_hat_rads"];
pub const TRAJECTORY_HEADER: [&str; 9] =
    ["time_s", "zeta_m", "fe_n", "x_m", "v_ms", "fp_n", "omega_hat_rads", "p_abs_w", "p_react_w"];
pub const HILBERT_HEADER: [&str; 3] = ["time_s", "omega_rad_s", "amplitude"];

/// Which quantity a two-column record carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Elevation,
    Force,
}

fn parse_f64(s: &str, row: usize, col: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().with_context(|| format!("row {row}: `{s}` in column {col} is not a number"))?;
    if !v.is_finite() {
        bail!("row {row}: non-finite value in column {col}");
    }
    Ok(v)
}

/// Reads a numeric CSV with an exact header. Rows are numbered from 1 after
/// the header.
pub fn read_table(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        bail!("{}: expected header `{}`, found `{}`", path.display(), header.join(","), found.join(","));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        if rec.len() != header.len() {
            bail!("{}: row {} has {} fields, expected {}", path.display(), i + 1, rec.len(), header.len());
        }
        rows.push(
            rec.iter()
                .zip(header)
                .map(|(s, c)| parse_f64(s, i + 1, c))
                .collect::<Result<Vec<_>>>()
                .with_context(|| path.display().to_string())?,
        );
    }
    Ok(rows)
}

/// Builds a uniformly sampled series from `(t, value)` rows. Time steps may
/// deviate from the first step by at most `1e-6·dt`.
pub fn series_from_rows(rows: &[Vec<f64>]) -> Result<TimeSeries> {
    if rows.len() < 2 {
        bail!("a record needs at least two rows, found {}", rows.len());
    }
    let t0 = rows[0][0];
    let dt = rows[1][0] - t0;
    if dt.is_nan() || dt <= 0.0 {
        bail!("time column must be increasing");
    }
    for (k, r) in rows.iter().enumerate() {
        let expected = t0 + k as f64 * dt;
        if (r[0] - expected).abs() > 1e-6 * dt {
            bail!("row {}: time {} breaks uniform sampling (dt = {dt})", k + 1, r[0]);
        }
    }
    TimeSeries::new(t0, dt, rows.iter().map(|r| r[1]).collect()).map_err(|e| anyhow!(e))
}

pub fn load_elevation(path: &Path) -> Result<TimeSeries> {
    series_from_rows(&read_table(path, &ELEVATION_HEADER)?).with_context(|| path.display().to_string())
}

pub fn load_force(path: &Path) -> Result<TimeSeries> {
    series_from_rows(&read_table(path, &FORCE_HEADER)?).with_context(|| path.display().to_string())
}

/// Loads an elevation or force record, telling them apart by header.
pub fn load_record(path: &Path) -> Result<(RecordKind, TimeSeries)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let second = rdr.headers()?.get(1).unwrap_or("").to_owned();
    match second.as_str() {
        "elevation_m" => Ok((RecordKind::Elevation, load_elevation(path)?)),
        "force_n" => Ok((RecordKind::Force, load_force(path)?)),
        _ => {
            bail!("{}: header must be `{}` or `{}`", path.display(), ELEVATION_HEADER.join(","), FORCE_HEADER.join(","))
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

/// Writes rows of numbers under a header. Values use Rust's shortest
/// round-trip formatting, so output is reproducible and reads back exactly.
pub fn write_table<'a>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = &'a [f64]>) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{}", header.join(","))?;
    let mut line = String::new();
    for r in rows {
        line.clear();
        for (i, v) in r.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series(path: &Path, header: &[&str; 2], s: &TimeSeries) -> Result<()> {
    let rows: Vec<[f64; 2]> = (0..s.len()).map(|k| [s.time(k), s.values()[k]]).collect();
    write_table(path, header, rows.iter().map(|r| &r[..]))
}

pub fn write_trajectory(path: &Path, zeta: &[f64], tr: &Trajectory) -> Result<()> {
    let p_abs = tr.p_abs();
    let p_react = tr.p_react();
    let rows: Vec<[f64; 9]> = (0..tr.len())
        .map(|k| {
            [
                tr.time(k),
                zeta.get(k).copied().unwrap_or(0.0),
                tr.fe[k],
                tr.x[k],
                tr.v[k],
                tr.fp[k],
                tr.omega_hat[k],
                p_abs[k],
                p_react[k],
            ]
        })
        .collect();
    write_table(path, &TRAJECTORY_HEADER, rows.iter().map(|r| &r[..]))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(std::io::BufReader::new(f)).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn load_hydro(path: &Path) -> Result<HydroTable> {
    let t: HydroTable = read_json(path)?;
    t.validate().with_context(|| path.display().to_string())?;
    Ok(t)
}

pub fn load_spectrum(path: &Path) -> Result<Spectrum> {
    read_json(path)
}
