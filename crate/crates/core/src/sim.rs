//! Cummins-equation integrator and power metrics.
//!
//! `M ẍ + ∫ h_r(t−s) ẋ(s) ds + S x = f_e + f_p` with `M = m + m_r(∞)`,
//! integrated by fixed-step RK4 from rest.

use alloc::vec::Vec;

use crate::control::{pto_force, tune, ControlConfig, Gains};
use crate::error::{Error, Result};
use crate::hydro::{HydroTable, RadiationKernel};
use crate::series::{trapezoid_uniform, TimeSeries};
use crate::signals::Spectrum;
use crate::{GRAVITY, RHO_SEA};

/// Seconds discarded from the start of every run before computing metrics.
pub const TRANSIENT_S: f64 = 120.0;

/// Sampled run; all vectors share `t0`, `dt` and length.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t0: f64,
    pub dt: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub fe: Vec<f64>,
    pub fp: Vec<f64>,
    pub f_damp: Vec<f64>,
    pub f_spring: Vec<f64>,
    pub f_rad: Vec<f64>,
    pub omega_hat: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Power absorbed by the damping term, `−f_damp·v`.
    pub fn p_abs(&self) -> Vec<f64> {
        self.f_damp.iter().zip(&self.v).map(|(f, v)| -f * v).collect()
    }

    /// Power through the spring term, `−f_spring·v`.
    pub fn p_react(&self) -> Vec<f64> {
        self.f_spring.iter().zip(&self.v).map(|(f, v)| -f * v).collect()
    }

    /// Total delivered power, `−f_p·v`.
    pub fn p_total(&self) -> Vec<f64> {
        self.fp.iter().zip(&self.v).map(|(f, v)| -f * v).collect()
    }
}

/// Scalar results. Everything except the energy balance skips the
/// transient.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    pub energy_j: f64,
    pub mean_power_w: f64,
    pub reactive_energy_j: f64,
    pub mean_reactive_power_w: f64,
    pub mean_abs_reactive_power_w: f64,
    /// `None` when no wave spectrum was supplied or `P̄ ≤ 0`.
    pub cwr: Option<f64>,
    pub pto_rating: Option<f64>,
    pub reactive_ratio: Option<f64>,
    pub max_abs_fp_n: f64,
    pub max_abs_f_damp_n: f64,
    pub max_abs_f_spring_n: f64,
    pub max_abs_x_m: f64,
    pub mean_omega_hat_rads: f64,
    pub excitation_work_j: f64,
    pub radiated_energy_j: f64,
    /// `|W_exc − W_pto − W_rad − ΔE_mech| / |W_exc|` over the whole run.
    pub energy_balance_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub trajectory: Trajectory,
    pub metrics: Metrics,
}

/// Deep-water wave power per metre of crest, `(ρ g² / 2) m₋₁`.
pub fn wave_power_per_width(zeta: &Spectrum) -> f64 {
    0.5 * RHO_SEA * GRAVITY * GRAVITY * zeta.moment(-1)
}

/// Integrates from rest over the span of `fe`, sampled at `dt`. `fe` and
/// `omega_hat` are interpolated linearly onto the step grid. PTO gains are
/// re-tuned from `ω̂` at the start of every step and held within it.
pub fn simulate(
    table: &HydroTable,
    kernel: &RadiationKernel,
    fe: &TimeSeries,
    omega_hat: &TimeSeries,
    ctrl: &ControlConfig,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument("simulation step must be positive"));
    }
    let span = fe.time(fe.len() - 1) - fe.t0();
    let n = libm::floor(span / dt + 1e-9) as usize + 1;
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let t0 = fe.t0();
    let force: Vec<f64> = (0..n).map(|k| fe.interp(t0 + k as f64 * dt)).collect();
    let what: Vec<f64> = (0..n).map(|k| omega_hat.interp(t0 + k as f64 * dt)).collect();

    let m_tot = table.total_inertia();
    let s = table.stiffness;
    let mem = libm::ceil(kernel.memory_length() / dt) as usize + 2;
    let h0: Vec<f64> = (0..=mem).map(|j| kernel.at(j as f64 * dt)).collect();
    let hh: Vec<f64> = (0..=mem).map(|j| kernel.at((j as f64 + 0.5) * dt)).collect();
    let (k0, kh) = (h0[0], hh[0]);
    let k1 = h0.get(1).copied().unwrap_or(0.0);

    let mut tr = Trajectory {
        t0,
        dt,
        x: Vec::with_capacity(n),
        v: Vec::with_capacity(n),
        fe: force.clone(),
        fp: Vec::with_capacity(n),
        f_damp: Vec::with_capacity(n),
        f_spring: Vec::with_capacity(n),
        f_rad: Vec::with_capacity(n),
        omega_hat: what.clone(),
    };
    let (mut x, mut v) = (0.0f64, 0.0f64);

    // trapezoid over the stored velocities, shifted by `tau`
    let history = |vs: &[f64], taps: &[f64]| -> f64 {
        let last = vs.len() - 1;
        let lo = last.saturating_sub(taps.len() - 1);
        let mut acc = 0.0;
        for k in lo..=last {
            let w = if k == 0 || k == last { 0.5 } else { 1.0 };
            acc += w * taps[last - k] * vs[k];
        }
        acc * dt
    };

    for step in 0..n {
        tr.x.push(x);
        tr.v.push(v);
        let g: Gains = tune(table, what[step], ctrl.mode);
        let c = pto_force(g, x, v, ctrl);
        tr.fp.push(c.f_p);
        tr.f_damp.push(c.f_damp);
        tr.f_spring.push(c.f_spring);
        let s0 = if step == 0 { 0.0 } else { history(&tr.v, &h0) };
        tr.f_rad.push(s0);
        if step + 1 == n {
            break;
        }
        let (sh, s1) = if step == 0 { (0.0, 0.0) } else { (history(&tr.v, &hh), history(&tr.v[..], &h0[1..])) };
        let fm = 0.5 * (force[step] + force[step + 1]);
        let accel = |xs: f64, vs: f64, f: f64, hist: f64, tau: f64, h_tau: f64| {
            let conv = hist + 0.5 * tau * (h_tau * v + k0 * vs);
            let p = pto_force(g, xs, vs, ctrl).f_p;
            (f + p - s * xs - conv) / m_tot
        };
        let a1 = accel(x, v, force[step], s0, 0.0, k0);
        let (x2, v2) = (x + 0.5 * dt * v, v + 0.5 * dt * a1);
        let a2 = accel(x2, v2, fm, sh, 0.5 * dt, kh);
        let (x3, v3) = (x + 0.5 * dt * v2, v + 0.5 * dt * a2);
        let a3 = accel(x3, v3, fm, sh, 0.5 * dt, kh);
        let (x4, v4) = (x + dt * v3, v + dt * a3);
        let a4 = accel(x4, v4, force[step + 1], s1, dt, k1);
        x += dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
        v += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        if !(x.is_finite() && v.is_finite()) {
            return Err(Error::Divergence(step + 1));
        }
    }
    Ok(tr)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Power and energy figures of a run. `zeta_spectrum` enables the CWR.
pub fn metrics(tr: &Trajectory, table: &HydroTable, zeta_spectrum: Option<&Spectrum>, transient_s: f64) -> Metrics {
    let n = tr.len();
    let i0 = (libm::ceil(transient_s / tr.dt - 1e-9) as usize).min(n.saturating_sub(2));
    let dt = tr.dt;
    let dur = (n - 1 - i0) as f64 * dt;
    let tail = |v: Vec<f64>| v[i0..].to_vec();

    let p_abs = tail(tr.p_abs());
    let p_react = tail(tr.p_react());
    let p_total = tail(tr.p_total());
    let energy = trapezoid_uniform(&p_abs, dt);
    let mean_power = energy / dur;
    let reactive_energy = trapezoid_uniform(&p_react, dt);
    let abs_react: Vec<f64> = p_react.iter().map(|p| p.abs()).collect();
    let mean_abs_react = trapezoid_uniform(&abs_react, dt) / dur;
    let positive = mean_power > 0.0;

    let fv = |f: &[f64]| trapezoid_uniform(&f.iter().zip(&tr.v).map(|(a, b)| a * b).collect::<Vec<_>>(), dt);
    let w_exc = fv(&tr.fe);
    let w_pto = -fv(&tr.fp);
    let w_rad = fv(&tr.f_rad);
    let (xe, ve) = (tr.x[n - 1], tr.v[n - 1]);
    let mech = 0.5 * table.total_inertia() * ve * ve + 0.5 * table.stiffness * xe * xe;
    let balance = if w_exc != 0.0 { (w_exc - w_pto - w_rad - mech).abs() / w_exc.abs() } else { 0.0 };

    let cwr = zeta_spectrum
        .map(wave_power_per_width)
        .filter(|j| *j > 0.0 && positive)
        .map(|j| mean_power / (2.0 * table.radius * j));

    Metrics {
        energy_j: energy,
        mean_power_w: mean_power,
        reactive_energy_j: reactive_energy,
        mean_reactive_power_w: reactive_energy / dur,
        mean_abs_reactive_power_w: mean_abs_react,
        cwr,
        pto_rating: positive.then(|| max_abs(&p_total) / mean_power),
        reactive_ratio: positive.then(|| mean_abs_react / mean_power),
        max_abs_fp_n: max_abs(&tr.fp[i0..]),
        max_abs_f_damp_n: max_abs(&tr.f_damp[i0..]),
        max_abs_f_spring_n: max_abs(&tr.f_spring[i0..]),
        max_abs_x_m: max_abs(&tr.x[i0..]),
        mean_omega_hat_rads: tr.omega_hat[i0..].iter().sum::<f64>() / (n - i0) as f64,
        excitation_work_j: w_exc,
        radiated_energy_j: w_rad,
        energy_balance_error: balance,
    }
}

/// [`simulate`] followed by [`metrics`] with the default transient.
pub fn run(
    table: &HydroTable,
    kernel: &RadiationKernel,
    fe: &TimeSeries,
    omega_hat: &TimeSeries,
    ctrl: &ControlConfig,
    dt: f64,
    zeta_spectrum: Option<&Spectrum>,
) -> Result<SimReport> {
    let trajectory = simulate(table, kernel, fe, omega_hat, ctrl, dt)?;
    let metrics = metrics(&trajectory, table, zeta_spectrum, TRANSIENT_S);
    Ok(SimReport { trajectory, metrics })
}
