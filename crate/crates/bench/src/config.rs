//! Benchmark configuration (a single JSON file).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use wec_core::control::{ControlConfig, ControlMode, Saturation};
use wec_core::estimate::{EkfConfig, FllConfig, HhtConfig};
use wec_core::signals::SeaShape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ekf,
    Fll,
    Hht,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ekf, Method::Fll, Method::Hht];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ekf => "ekf",
            Method::Fll => "fll",
            Method::Hht => "hht",
        }
    }
}

pub fn control_name(mode: ControlMode) -> &'static str {
    match mode {
        ControlMode::Pc => "pc",
        ControlMode::Rc => "rc",
    }
}

/// Where a sea-state record comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeaSource {
    /// One of the named parametric seas `S1`..`S6`.
    Preset(String),
    /// A parametric spectrum.
    Spectrum(SeaShape),
    /// A measured elevation record (`time_s,elevation_m`).
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeaSpec {
    pub name: String,
    #[serde(flatten)]
    pub source: SeaSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SeaSpec {
    pub fn is_parametric(&self) -> bool {
        !matches!(self.source, SeaSource::Csv(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlSection {
    /// Used when `controllers` is empty.
    pub mode: ControlMode,
    pub fmax_n: f64,
    pub saturation: Saturation,
}

impl Default for ControlSection {
    fn default() -> Self {
        Self { mode: ControlMode::Pc, fmax_n: 5e5, saturation: Saturation::PerTerm }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// Hydrodynamic table; the built-in sample cylinder when absent.
    pub hydro: Option<PathBuf>,
    pub seas: Vec<SeaSpec>,
    pub estimators: Vec<Method>,
    pub controllers: Vec<ControlMode>,
    /// Simulator step (s).
    pub dt: f64,
    /// Length of synthesized records (s).
    pub duration_s: f64,
    /// Sampling interval of synthesized records and estimator input (s).
    pub sample_dt: f64,
    pub control: ControlSection,
    pub ekf: EkfConfig,
    pub fll: FllConfig,
    pub hht: HhtConfig,
    pub out: PathBuf,
    /// Write one trajectory CSV per cell.
    pub trajectories: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            hydro: None,
            seas: Vec::new(),
            estimators: Method::ALL.to_vec(),
            controllers: vec![ControlMode::Pc, ControlMode::Rc],
            dt: 0.05,
            duration_s: 1800.0,
            sample_dt: 0.78125,
            control: ControlSection::default(),
            ekf: EkfConfig::default(),
            fll: FllConfig::default(),
            hht: HhtConfig::default(),
            out: PathBuf::from("results"),
            trajectories: true,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub method: Option<Method>,
    pub control: Option<ControlMode>,
    pub fmax: Option<f64>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl BenchConfig {
    /// Reads a config and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: BenchConfig = crate::io::read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(h) = cfg.hydro.as_mut() {
            rebase(h);
        }
        for s in &mut cfg.seas {
            if let SeaSource::Csv(p) = &mut s.source {
                rebase(p);
            }
        }
        rebase(&mut cfg.out);
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(m) = o.method {
            self.estimators = vec![m];
        }
        if let Some(c) = o.control {
            self.controllers = vec![c];
        }
        if let Some(f) = o.fmax {
            self.control.fmax_n = f;
        }
        if let Some(dt) = o.dt {
            self.dt = dt;
        }
        if let Some(s) = o.seed {
            for sea in self.seas.iter_mut().filter(|s| s.is_parametric()) {
                sea.seed = Some(s);
            }
        }
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        self.fll.step_s = self.dt;
    }

    pub fn controllers(&self) -> Vec<ControlMode> {
        if self.controllers.is_empty() {
            vec![self.control.mode]
        } else {
            self.controllers.clone()
        }
    }

    pub fn control_config(&self, mode: ControlMode) -> ControlConfig {
        ControlConfig { mode, f_max: self.control.fmax_n, saturation: self.control.saturation }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seas.is_empty() {
            bail!("config lists no sea states");
        }
        if self.estimators.is_empty() {
            bail!("config lists no estimators");
        }
        if !(self.dt > 0.0 && self.sample_dt > 0.0 && self.duration_s > 0.0) {
            bail!("dt, sample_dt and duration_s must be positive");
        }
        if self.control.saturation != Saturation::Off
            && self.control.fmax_n.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        {
            bail!("control.fmax_n must be positive when saturation is enabled");
        }
        let mut names = std::collections::BTreeSet::new();
        for s in &self.seas {
            if !names.insert(&s.name) {
                bail!("duplicate sea name `{}`", s.name);
            }
            if s.name.is_empty() || s.name.contains(['/', '\\']) {
                bail!("sea name `{}` is not usable as a file name", s.name);
            }
            match &s.source {
                SeaSource::Csv(p) => {
                    if !p.exists() {
                        bail!("sea `{}`: {} does not exist", s.name, p.display());
                    }
                }
                SeaSource::Preset(p) => {
                    SeaShape::preset(p).with_context(|| format!("sea `{}`: unknown preset `{p}`", s.name))?;
                }
                SeaSource::Spectrum(_) => {}
            }
            if s.is_parametric() && s.seed.is_none() {
                bail!("sea `{}` is parametric and needs a seed (set it in the config or pass --seed)", s.name);
            }
        }
        if let Some(h) = &self.hydro {
            if !h.exists() {
                bail!("hydro table {} does not exist", h.display());
            }
        }
        Ok(())
    }
}
