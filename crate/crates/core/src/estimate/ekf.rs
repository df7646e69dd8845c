//! Extended Kalman filter on a rotating phasor `[ψ, ψ*, ω]`.
//!
//! The measurement is `ψ`. Prediction rotates `(ψ, ψ*)` by `ω·Ts` and keeps
//! `ω` as a random walk.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

use super::{coarse_peak_frequency, OMEGA_MAX, OMEGA_MIN};

type Mat3 = [[f64; 3]; 3];

/// Noise settings. Unset `q_psi` and `r` are taken relative to the
/// variance of the record being tracked.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct EkfConfig {
    pub q_psi: Option<f64>,
    pub q_omega: f64,
    pub r: Option<f64>,
    pub omega_min: f64,
    pub omega_max: f64,
}

impl EkfConfig {
    /// Default `q_psi` as a multiple of the force variance.
    pub const Q_PSI_REL: f64 = 1.0;
    /// Default `r` as a multiple of the force variance.
    pub const R_REL: f64 = 0.1;
}

impl Default for EkfConfig {
    fn default() -> Self {
        Self { q_psi: None, q_omega: 1e-4, r: None, omega_min: OMEGA_MIN, omega_max: OMEGA_MAX }
    }
}

/// Filter state and its fixed noise model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EkfState {
    pub x: [f64; 3],
    pub p: Mat3,
    pub q: [f64; 3],
    pub r: f64,
    pub ts: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

/// Per-sample outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EkfStep {
    pub omega: f64,
    pub amplitude: f64,
    pub innovation: f64,
}

fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

fn symmetrize(p: &mut Mat3) {
    for i in 0..3 {
        for j in i + 1..3 {
            let m = 0.5 * (p[i][j] + p[j][i]);
            p[i][j] = m;
            p[j][i] = m;
        }
    }
}

impl EkfState {
    /// `ψ = f0`, `ψ* = 0`, `P0 = diag(r, r, 0.25)`.
    pub fn new(f0: f64, omega0: f64, q: [f64; 3], r: f64, ts: f64, cfg: &EkfConfig) -> Self {
        Self {
            x: [f0, 0.0, omega0.clamp(cfg.omega_min, cfg.omega_max)],
            p: [[r, 0.0, 0.0], [0.0, r, 0.0], [0.0, 0.0, 0.25]],
            q,
            r,
            ts,
            omega_min: cfg.omega_min,
            omega_max: cfg.omega_max,
        }
    }

    pub fn omega(&self) -> f64 {
        self.x[2]
    }

    pub fn amplitude(&self) -> f64 {
        libm::hypot(self.x[0], self.x[1])
    }

    /// Time update: rotate the phasor and propagate `P` through the Jacobian.
    pub fn predict(&mut self) {
        let [a, b, w] = self.x;
        let (s, c) = libm::sincos(w * self.ts);
        let ts = self.ts;
        let j: Mat3 = [[c, s, ts * (-s * a + c * b)], [-s, c, ts * (-c * a - s * b)], [0.0, 0.0, 1.0]];
        self.x = [c * a + s * b, -s * a + c * b, w];
        let mut p = mul(&mul(&j, &self.p), &transpose(&j));
        for i in 0..3 {
            p[i][i] += self.q[i];
        }
        symmetrize(&mut p);
        self.p = p;
    }

    /// Measurement update with `z = ψ + noise` (Joseph form).
    pub fn update(&mut self, z: f64, index: usize) -> Result<EkfStep> {
        let sk = self.p[0][0] + self.r;
        if !(sk > 0.0) || !sk.is_finite() {
            return Err(Error::NumericalDegeneracy(index));
        }
        let k = [self.p[0][0] / sk, self.p[1][0] / sk, self.p[2][0] / sk];
        let innovation = z - self.x[0];
        for i in 0..3 {
            self.x[i] += k[i] * innovation;
        }
        self.x[2] = self.x[2].clamp(self.omega_min, self.omega_max);
        // (I - K H) with H = [1, 0, 0]
        let mut a: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            a[i][0] -= k[i];
        }
        let mut p = mul(&mul(&a, &self.p), &transpose(&a));
        for i in 0..3 {
            for j in 0..3 {
                p[i][j] += k[i] * self.r * k[j];
            }
        }
        symmetrize(&mut p);
        self.p = p;
        Ok(EkfStep { omega: self.x[2], amplitude: self.amplitude(), innovation })
    }

    /// Predict then update. On a degenerate innovation covariance the state
    /// is restored to its value before the call.
    pub fn step(&mut self, z: f64, index: usize) -> Result<EkfStep> {
        if !z.is_finite() {
            return Err(Error::NonFiniteInput(index));
        }
        let prior = *self;
        self.predict();
        self.update(z, index).inspect_err(|_| *self = prior)
    }
}

/// Tracks the force frequency sample by sample; output shares the input's
/// time base. The first sample is only assimilated, later ones are
/// predicted and assimilated.
pub fn ekf_run(fe: &TimeSeries, cfg: &EkfConfig) -> Result<TimeSeries> {
    let var = fe.variance();
    let r = cfg.r.unwrap_or(EkfConfig::R_REL * var);
    let q_psi = cfg.q_psi.unwrap_or(EkfConfig::Q_PSI_REL * var);
    if !(r > 0.0) {
        return Err(Error::ZeroRecord);
    }
    let omega0 = coarse_peak_frequency(fe, 128, cfg.omega_min, cfg.omega_max);
    let v = fe.values();
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput(i));
    }
    let mut st = EkfState::new(v[0], omega0, [q_psi, q_psi, cfg.q_omega], r, fe.dt(), cfg);
    let mut out = alloc::vec::Vec::with_capacity(v.len());
    out.push(st.update(v[0], 0)?.omega);
    for (k, &z) in v.iter().enumerate().skip(1) {
        out.push(st.step(z, k)?.omega);
    }
    fe.with_values(out)
}
