//! Second-order generalized integrator with a frequency-locked loop.
//!
//! Realization: `ξ̇ = κω̂(u − ξ) − ω̂ξ*`, `ξ* = ω̂ν`, `ν̇ = ξ`,
//! `ω̂̇ = −γ(u − ξ)ξ*ω̂`, where `u` is the normalized force.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

use super::{coarse_peak_frequency, OMEGA_MAX, OMEGA_MIN};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FllConfig {
    pub kappa: f64,
    pub gamma: f64,
    pub norm_window_s: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    /// Integration step; the input is interpolated linearly between samples.
    pub step_s: f64,
}

impl Default for FllConfig {
    fn default() -> Self {
        Self {
            kappa: core::f64::consts::SQRT_2,
            gamma: 0.16,
            norm_window_s: 120.0,
            omega_min: OMEGA_MIN,
            omega_max: OMEGA_MAX,
            step_s: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FllState {
    pub xi: f64,
    pub nu: f64,
    pub omega_hat: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

impl FllState {
    pub fn new(omega0: f64, cfg: &FllConfig) -> Self {
        Self {
            xi: 0.0,
            nu: 0.0,
            omega_hat: omega0.clamp(cfg.omega_min, cfg.omega_max),
            kappa: cfg.kappa,
            gamma: cfg.gamma,
            omega_min: cfg.omega_min,
            omega_max: cfg.omega_max,
        }
    }

    /// Quadrature output `ξ* = ω̂ν`.
    pub fn xi_q(&self) -> f64 {
        self.omega_hat * self.nu
    }

    fn deriv(&self, s: [f64; 3], u: f64) -> [f64; 3] {
        let [xi, nu, w] = s;
        let e = u - xi;
        let xq = w * nu;
        [self.kappa * w * e - w * xq, xi, -self.gamma * e * xq * w]
    }

    /// One RK4 step of length `h`, with the input moving linearly from `u0`
    /// to `u1`. Returns the clamped frequency.
    pub fn step(&mut self, u0: f64, u1: f64, h: f64) -> Result<f64> {
        if !(u0.is_finite() && u1.is_finite()) {
            return Err(Error::NonFiniteInput(0));
        }
        let um = 0.5 * (u0 + u1);
        let s = [self.xi, self.nu, self.omega_hat];
        let add = |a: [f64; 3], b: [f64; 3], c: f64| [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]];
        let k1 = self.deriv(s, u0);
        let k2 = self.deriv(add(s, k1, h / 2.0), um);
        let k3 = self.deriv(add(s, k2, h / 2.0), um);
        let k4 = self.deriv(add(s, k3, h), u1);
        let mut n = [0.0; 3];
        for i in 0..3 {
            n[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        self.xi = n[0];
        self.nu = n[1];
        self.omega_hat = n[2].clamp(self.omega_min, self.omega_max);
        Ok(self.omega_hat)
    }
}

/// Divides by a causal sliding RMS over `window_s`. Samples inside the first
/// window use that window's RMS.
pub fn normalize_sliding_rms(fe: &TimeSeries, window_s: f64) -> Result<TimeSeries> {
    let v = fe.values();
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput(i));
    }
    if v.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroRecord);
    }
    let nw = (libm::round(window_s / fe.dt()) as usize).clamp(1, v.len());
    let first: f64 = v[..nw].iter().map(|x| x * x).sum::<f64>() / nw as f64;
    let mut acc = first * nw as f64;
    let out = v
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let ms = if i < nw {
                first
            } else {
                acc += x * x - v[i - nw] * v[i - nw];
                acc.max(0.0) / nw as f64
            };
            if ms > 0.0 {
                x / libm::sqrt(ms)
            } else {
                0.0
            }
        })
        .collect();
    fe.with_values(out)
}

/// Runs the loop over a pre-normalized input and reports `ω̂` at each input
/// sample time.
pub fn fll_track(u: &TimeSeries, omega0: f64, cfg: &FllConfig) -> Result<(TimeSeries, FllState)> {
    if !(cfg.step_s > 0.0) {
        return Err(Error::InvalidArgument("FLL step must be positive"));
    }
    let v = u.values();
    let sub = (libm::ceil(u.dt() / cfg.step_s - 1e-9) as usize).max(1);
    let h = u.dt() / sub as f64;
    let mut st = FllState::new(omega0, cfg);
    let mut out = Vec::with_capacity(v.len());
    out.push(st.omega_hat);
    for k in 0..v.len() - 1 {
        for j in 0..sub {
            let a = j as f64 / sub as f64;
            let b = (j + 1) as f64 / sub as f64;
            let u0 = v[k] * (1.0 - a) + v[k + 1] * a;
            let u1 = v[k] * (1.0 - b) + v[k + 1] * b;
            st.step(u0, u1, h).map_err(|_| Error::NonFiniteInput(k))?;
        }
        out.push(st.omega_hat);
    }
    Ok((u.with_values(out)?, st))
}

/// Normalizes the force and tracks its frequency.
pub fn fll_run(fe: &TimeSeries, cfg: &FllConfig) -> Result<TimeSeries> {
    let u = normalize_sliding_rms(fe, cfg.norm_window_s)?;
    let omega0 = coarse_peak_frequency(&u, 128, cfg.omega_min, cfg.omega_max);
    Ok(fll_track(&u, omega0, cfg)?.0)
}
