//! PTO tuning laws and force saturation.

use crate::hydro::HydroTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ControlMode {
    /// Damping only.
    #[cfg_attr(feature = "serde", serde(alias = "passive"))]
    Pc,
    /// Damping plus spring.
    #[cfg_attr(feature = "serde", serde(alias = "reactive"))]
    Rc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Saturation {
    /// Damping and spring terms each clipped to ±f_max.
    PerTerm,
    /// The summed force clipped to ±f_max.
    Total,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ControlConfig {
    pub mode: ControlMode,
    #[cfg_attr(feature = "serde", serde(rename = "fmax_n"))]
    pub f_max: f64,
    pub saturation: Saturation,
}

impl ControlConfig {
    pub fn unconstrained(mode: ControlMode) -> Self {
        Self { mode, f_max: f64::INFINITY, saturation: Saturation::Off }
    }

    pub fn per_term(mode: ControlMode, f_max: f64) -> Self {
        Self { mode, f_max, saturation: Saturation::PerTerm }
    }
}

/// PTO damping and stiffness.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Gains {
    pub b_p: f64,
    pub s_p: f64,
}

/// Force split into its terms after saturation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PtoCommand {
    pub b_p: f64,
    pub s_p: f64,
    pub f_damp: f64,
    pub f_spring: f64,
    pub f_p: f64,
}

/// `B_p = sqrt(B_r² + (ω(m + m_r) − S/ω)²)` at `w`.
pub fn pc_damping(table: &HydroTable, w: f64) -> f64 {
    let c = table.interp(w);
    let reactance = w * (table.mass + c.added_mass) - table.stiffness / w;
    libm::hypot(c.damping, reactance)
}

/// `B_p = B_r`, `S_p = ω²(m + m_r) − S` at `w`.
pub fn rc_params(table: &HydroTable, w: f64) -> Gains {
    let c = table.interp(w);
    Gains { b_p: c.damping, s_p: w * w * (table.mass + c.added_mass) - table.stiffness }
}

pub fn tune(table: &HydroTable, w: f64, mode: ControlMode) -> Gains {
    match mode {
        ControlMode::Pc => Gains { b_p: pc_damping(table, w), s_p: 0.0 },
        ControlMode::Rc => rc_params(table, w),
    }
}

/// `f_p = −B_p v − S_p x` with the configured saturation.
pub fn pto_force(g: Gains, x: f64, v: f64, cfg: &ControlConfig) -> PtoCommand {
    let mut f_damp = -g.b_p * v;
    let mut f_spring = -g.s_p * x;
    match cfg.saturation {
        Saturation::Off => {}
        Saturation::PerTerm => {
            f_damp = f_damp.clamp(-cfg.f_max, cfg.f_max);
            f_spring = f_spring.clamp(-cfg.f_max, cfg.f_max);
        }
        Saturation::Total => {
            let total = f_damp + f_spring;
            if total.abs() > cfg.f_max {
                let k = cfg.f_max / total.abs();
                f_damp *= k;
                f_spring *= k;
            }
        }
    }
    PtoCommand { b_p: g.b_p, s_p: g.s_p, f_damp, f_spring, f_p: f_damp + f_spring }
}
