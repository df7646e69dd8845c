//! The experiment matrix: sea state × estimator × controller.

use std::path::Path;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use wec_core::control::ControlMode;
use wec_core::estimate::{ekf_run, fll_run, hht_run};
use wec_core::hydro::{cylinder_sample, excitation_force, radiation_kernel, HydroTable, RadiationKernel};
use wec_core::signals::{
    estimate_spectrum, resample_fourier, spectral_stats, synthesize_sea, SeaShape, SpectralStats, Spectrum,
};
use wec_core::sim::{self, Metrics, Trajectory};
use wec_core::TimeSeries;

use crate::config::{control_name, BenchConfig, Method, SeaSource, SeaSpec};
use crate::io;

/// A sea state ready for estimation and simulation.
#[derive(Debug, Clone)]
pub struct PreparedSea {
    pub name: String,
    pub zeta: TimeSeries,
    pub fe: TimeSeries,
    /// Welch estimates of the realized records.
    pub zeta_spectrum: Spectrum,
    pub fe_stats: SpectralStats,
    pub zeta_stats: SpectralStats,
}

pub fn load_hydro(cfg: &BenchConfig) -> Result<HydroTable> {
    match &cfg.hydro {
        Some(p) => io::load_hydro(p),
        None => Ok(cylinder_sample()),
    }
}

pub fn sea_record(spec: &SeaSpec, cfg: &BenchConfig) -> Result<TimeSeries> {
    let shape = match &spec.source {
        SeaSource::Csv(p) => return io::load_elevation(p),
        SeaSource::Preset(name) => SeaShape::preset(name).ok_or_else(|| anyhow!("unknown preset `{name}`"))?,
        SeaSource::Spectrum(s) => *s,
    };
    let seed = spec.seed.ok_or_else(|| anyhow!("sea `{}` needs a seed", spec.name))?;
    Ok(synthesize_sea(&shape.spectrum()?, cfg.duration_s, cfg.sample_dt, seed)?)
}

pub fn prepare_sea(name: &str, zeta: TimeSeries, table: &HydroTable) -> Result<PreparedSea> {
    let fe = excitation_force(table, &zeta)?;
    let zeta_spectrum = estimate_spectrum(&zeta)?;
    let fe_stats = spectral_stats(&estimate_spectrum(&fe)?)?;
    let zeta_stats = spectral_stats(&zeta_spectrum)?;
    Ok(PreparedSea { name: name.to_owned(), zeta, fe, zeta_spectrum, fe_stats, zeta_stats })
}

/// Frequency track at the force sampling instants.
pub fn track(method: Method, fe: &TimeSeries, cfg: &BenchConfig) -> Result<TimeSeries> {
    Ok(match method {
        Method::Ekf => ekf_run(fe, &cfg.ekf)?,
        Method::Fll => fll_run(fe, &cfg.fll)?,
        Method::Hht => hht_run(fe, &cfg.hht)?.omega,
    })
}

/// Upsamples a record to the simulator step. Band-limited interpolation
/// keeps the force spectrum intact; the record must span whole steps.
pub fn to_sim_rate(x: &TimeSeries, dt: f64) -> Result<TimeSeries> {
    if (x.dt() - dt).abs() < 1e-12 {
        return Ok(x.clone());
    }
    Ok(resample_fourier(x, dt)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub sea: String,
    pub method: Method,
    pub control: ControlMode,
    pub dt: f64,
    pub fmax_n: f64,
    pub metrics: Metrics,
    pub fe_stats: SpectralStats,
    pub zeta_stats: SpectralStats,
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub sea: String,
    pub method: Method,
    pub control: ControlMode,
    pub result: std::result::Result<(CellReport, Trajectory, Vec<f64>), String>,
}

impl CellOutcome {
    pub fn stem(&self) -> String {
        format!("{}_{}_{}", self.sea, self.method.name(), control_name(self.control))
    }
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub cells: Vec<CellOutcome>,
}

impl BenchRun {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.result.is_err()).count()
    }

    pub fn report(&self, sea: &str, method: Method, control: ControlMode) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.sea == sea && c.method == method && c.control == control)
            .and_then(|c| c.result.as_ref().ok().map(|r| &r.0))
    }
}

struct SimInputs {
    sea: PreparedSea,
    fe_fine: TimeSeries,
    zeta_fine: TimeSeries,
}

fn sim_inputs(spec: &SeaSpec, cfg: &BenchConfig, table: &HydroTable) -> Result<SimInputs> {
    let zeta = sea_record(spec, cfg)?;
    let sea = prepare_sea(&spec.name, zeta, table)?;
    let fe_fine = to_sim_rate(&sea.fe, cfg.dt)?;
    let zeta_fine = to_sim_rate(&sea.zeta, cfg.dt)?;
    Ok(SimInputs { sea, fe_fine, zeta_fine })
}

/// Runs every cell. Cell failures are recorded, not fatal; only a bad hydro
/// table aborts the run.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchRun> {
    let table = load_hydro(cfg)?;
    let kernel: RadiationKernel = radiation_kernel(&table, cfg.dt / 2.0).context("radiation kernel")?;
    let controllers = cfg.controllers();

    let seas: Vec<std::result::Result<SimInputs, String>> =
        cfg.seas.par_iter().map(|s| sim_inputs(s, cfg, &table).map_err(|e| format!("{e:#}"))).collect();

    let pairs: Vec<(usize, Method)> =
        (0..seas.len()).flat_map(|i| cfg.estimators.iter().map(move |m| (i, *m))).collect();
    let tracks: Vec<std::result::Result<TimeSeries, String>> = pairs
        .par_iter()
        .map(|&(i, m)| {
            let s = seas[i].as_ref().map_err(Clone::clone)?;
            track(m, &s.sea.fe, cfg).map_err(|e| format!("{}: {e:#}", m.name()))
        })
        .collect();

    let cells: Vec<(usize, ControlMode)> =
        (0..pairs.len()).flat_map(|p| controllers.iter().map(move |c| (p, *c))).collect();
    let cells = cells
        .par_iter()
        .map(|&(p, control)| {
            let (i, method) = pairs[p];
            let result = (|| {
                let inputs = seas[i].as_ref().map_err(Clone::clone)?;
                let w = tracks[p].as_ref().map_err(Clone::clone)?;
                let ctrl = cfg.control_config(control);
                let rep = sim::run(&table, &kernel, &inputs.fe_fine, w, &ctrl, cfg.dt, Some(&inputs.sea.zeta_spectrum))
                    .map_err(|e| e.to_string())?;
                let report = CellReport {
                    sea: inputs.sea.name.clone(),
                    method,
                    control,
                    dt: cfg.dt,
                    fmax_n: cfg.control.fmax_n,
                    metrics: rep.metrics,
                    fe_stats: inputs.sea.fe_stats,
                    zeta_stats: inputs.sea.zeta_stats,
                };
                Ok((report, rep.trajectory, inputs.zeta_fine.values().to_vec()))
            })();
            CellOutcome { sea: cfg.seas[i].name.clone(), method, control, result }
        })
        .collect();
    Ok(BenchRun { cells })
}

pub const RESULTS_HEADER: [&str; 18] = [
    "sea",
    "method",
    "control",
    "status",
    "energy_j",
    "mean_power_w",
    "cwr",
    "pto_rating",
    "reactive_ratio",
    "mean_abs_reactive_power_w",
    "max_abs_fp_n",
    "max_abs_f_damp_n",
    "max_abs_f_spring_n",
    "max_abs_x_m",
    "mean_omega_hat_rads",
    "omega_e_fe",
    "omega_1_fe",
    "energy_balance_error",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes per-cell summaries and trajectories plus the combined table.
pub fn write_outputs(run: &BenchRun, out: &Path, trajectories: bool) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = csv::Writer::from_path(out.join("results.csv"))?;
    w.write_record(RESULTS_HEADER)?;
    for c in &run.cells {
        let head = [c.sea.clone(), c.method.name().to_owned(), control_name(c.control).to_owned()];
        match &c.result {
            Ok((rep, tr, zeta)) => {
                io::write_json(&out.join(format!("{}.json", c.stem())), rep)?;
                if trajectories {
                    io::write_trajectory(&out.join(format!("{}.csv", c.stem())), zeta, tr)?;
                }
                let m = &rep.metrics;
                let row = [
                    "ok".to_owned(),
                    m.energy_j.to_string(),
                    m.mean_power_w.to_string(),
                    opt(m.cwr),
                    opt(m.pto_rating),
                    opt(m.reactive_ratio),
                    m.mean_abs_reactive_power_w.to_string(),
                    m.max_abs_fp_n.to_string(),
                    m.max_abs_f_damp_n.to_string(),
                    m.max_abs_f_spring_n.to_string(),
                    m.max_abs_x_m.to_string(),
                    m.mean_omega_hat_rads.to_string(),
                    rep.fe_stats.omega_e.to_string(),
                    rep.fe_stats.omega_1.to_string(),
                    m.energy_balance_error.to_string(),
                ];
                w.write_record(head.iter().chain(row.iter()))?;
            }
            Err(e) => {
                let mut row: Vec<String> = head.to_vec();
                row.push(format!("error: {e}"));
                row.resize(RESULTS_HEADER.len(), String::new());
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
