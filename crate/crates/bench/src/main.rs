use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use wec_core::control::ControlMode;
use wec_core::estimate::{emd_decompose, hht::default_imf_count, hilbert_spectrum};
use wec_core::hydro::excitation_force;
use wec_core::signals::{estimate_spectrum, spectral_stats, synthesize_sea, SeaShape, SpectralStats};

use wec_bench::config::{BenchConfig, Method, Overrides};
use wec_bench::harness::{self, load_hydro, track, write_outputs};
use wec_bench::io::{self, RecordKind};

#[derive(Parser)]
#[command(name = "wec-bench", version, about = "Wave-energy converter control benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Default)]
struct Common {
    /// Benchmark configuration JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Track the excitation-force frequency of one record.
    Estimate {
        /// Elevation (`time_s,elevation_m`) or force (`time_s,force_n`) CSV.
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        common: Common,
        /// Also write the Hilbert spectrum of every IMF (hht only).
        #[arg(long)]
        hilbert_spectrum: bool,
    },
    /// Run the sea × estimator × controller matrix of a config.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long, value_parser = parse_control)]
        control: Option<ControlMode>,
        /// Per-term PTO force limit (N).
        #[arg(long)]
        fmax: Option<f64>,
        /// Simulator step (s).
        #[arg(long)]
        dt: Option<f64>,
        /// Seed for every parametric sea.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Welch spectrum and spectral statistics of a record.
    Spectrum {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Synthesize an elevation record from a named sea.
    Synth {
        /// Preset name, S1..S6.
        #[arg(long)]
        preset: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1800.0)]
        duration: f64,
        #[arg(long, default_value_t = 0.78125)]
        dt: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the built-in sample cylinder table as JSON.
    HydroSample {
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_control(s: &str) -> Result<ControlMode, String> {
    match s {
        "pc" | "passive" => Ok(ControlMode::Pc),
        "rc" | "reactive" => Ok(ControlMode::Rc),
        _ => Err(format!("unknown controller `{s}` (expected pc or rc)")),
    }
}

fn load_config(common: &Common) -> Result<BenchConfig> {
    match &common.config {
        Some(p) => BenchConfig::load(p),
        None => Ok(BenchConfig::default()),
    }
}

#[derive(Serialize)]
struct EstimateSummary {
    method: Method,
    input_kind: &'static str,
    mean_omega_hat_rads: f64,
    omega_e_fe: f64,
    omega_1_fe: f64,
    fe_stats: SpectralStats,
    transient_s: f64,
}

fn estimate(input: PathBuf, method: Method, common: Common, hilbert: bool) -> Result<()> {
    let mut cfg = load_config(&common)?;
    cfg.apply(&Overrides { out: common.out.clone(), ..Default::default() });
    let (kind, record) = io::load_record(&input)?;
    let fe = match kind {
        RecordKind::Force => record,
        RecordKind::Elevation => excitation_force(&load_hydro(&cfg)?, &record)?,
    };
    let w = track(method, &fe, &cfg)?;
    let stats = spectral_stats(&estimate_spectrum(&fe)?)?;
    let out = &cfg.out;
    io::write_series(&out.join(format!("track_{}.csv", method.name())), &io::TRACK_HEADER, &w)?;
    let summary = EstimateSummary {
        method,
        input_kind: if kind == RecordKind::Force { "force" } else { "elevation" },
        mean_omega_hat_rads: w.mean_after(wec_core::sim::TRANSIENT_S),
        omega_e_fe: stats.omega_e,
        omega_1_fe: stats.omega_1,
        fe_stats: stats,
        transient_s: wec_core::sim::TRANSIENT_S,
    };
    io::write_json(&out.join(format!("summary_{}.json", method.name())), &summary)?;
    if hilbert {
        if method != Method::Hht {
            bail!("--hilbert-spectrum needs --method hht");
        }
        let set = emd_decompose(&fe, cfg.hht.n_imf_max.unwrap_or(default_imf_count(fe.len())), &cfg.hht.emd_options())?;
        let rows: Vec<[f64; 3]> = hilbert_spectrum(&set, &cfg.hht)?.into_iter().map(|(t, w, a)| [t, w, a]).collect();
        io::write_table(&out.join("hilbert_spectrum.csv"), &io::HILBERT_HEADER, rows.iter().map(|r| &r[..]))?;
    }
    println!(
        "{}: mean omega_hat {:.4} rad/s (omega_e,fe {:.4}, omega_1,fe {:.4})",
        method.name(),
        summary.mean_omega_hat_rads,
        stats.omega_e,
        stats.omega_1
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    common: Common,
    method: Option<Method>,
    control: Option<ControlMode>,
    fmax: Option<f64>,
    dt: Option<f64>,
    seed: Option<u64>,
) -> Result<bool> {
    let Some(path) = &common.config else { bail!("simulate needs --config") };
    let mut cfg = BenchConfig::load(path)?;
    cfg.apply(&Overrides { method, control, fmax, dt, seed, out: common.out.clone() });
    cfg.validate()?;
    let run = harness::run_bench(&cfg)?;
    write_outputs(&run, &cfg.out, cfg.trajectories)?;
    for c in &run.cells {
        match &c.result {
            Ok((r, _, _)) => println!(
                "{:<24} E = {:.4e} J  CWR = {}  rating = {}",
                c.stem(),
                r.metrics.energy_j,
                r.metrics.cwr.map_or("-".into(), |v| format!("{v:.4}")),
                r.metrics.pto_rating.map_or("-".into(), |v| format!("{v:.2}")),
            ),
            Err(e) => eprintln!("{:<24} FAILED: {e}", c.stem()),
        }
    }
    Ok(run.failures() == 0)
}

#[derive(Serialize)]
struct SpectrumStatsFile {
    input_kind: &'static str,
    stats: SpectralStats,
}

fn spectrum(input: PathBuf, common: Common) -> Result<()> {
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let (kind, x) = io::load_record(&input)?;
    let s = estimate_spectrum(&x)?;
    let stats = spectral_stats(&s)?;
    io::write_json(&out.join("spectrum.json"), &s)?;
    let input_kind = if kind == RecordKind::Force { "force" } else { "elevation" };
    io::write_json(&out.join("stats.json"), &SpectrumStatsFile { input_kind, stats })?;
    println!(
        "Hs {:.3}  omega_p {:.3}  omega_e {:.3}  omega_1 {:.3}",
        stats.hs, stats.omega_p, stats.omega_e, stats.omega_1
    );
    Ok(())
}

fn synth(preset: &str, seed: u64, duration: f64, dt: f64, out: PathBuf) -> Result<()> {
    let shape = SeaShape::preset(preset).with_context(|| format!("unknown preset `{preset}`"))?;
    let zeta = synthesize_sea(&shape.spectrum()?, duration, dt, seed)?;
    io::write_series(&out, &io::ELEVATION_HEADER, &zeta)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate { input, method, common, hilbert_spectrum } => {
            estimate(input, method, common, hilbert_spectrum).map(|_| true)
        }
        Command::Simulate { common, method, control, fmax, dt, seed } => {
            simulate(common, method, control, fmax, dt, seed)
        }
        Command::Spectrum { input, common } => spectrum(input, common).map(|_| true),
        Command::Synth { preset, seed, duration, dt, out } => synth(&preset, seed, duration, dt, out).map(|_| true),
        Command::HydroSample { out } => io::write_json(&out, &wec_core::hydro::cylinder_sample()).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
