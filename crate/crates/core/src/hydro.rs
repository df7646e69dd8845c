//! Hydrodynamic coefficients of a heaving body, the radiation memory kernel
//! and the wave excitation force.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{bin_omega, fft_real, ifft};
use crate::series::{trapezoid, TimeSeries};
use crate::{GRAVITY, RHO_SEA};

/// Frequency-domain coefficients of a single-DoF heaving body.
///
/// The serialized field names are the on-disk table format.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HydroTable {
    /// Ascending angular-frequency grid (rad/s).
    pub omega: Vec<f64>,
    /// m_r(ω), kg.
    pub added_mass: Vec<f64>,
    /// B_r(ω), N·s/m.
    pub radiation_damping: Vec<f64>,
    /// |H_e(ω)|, N/m.
    pub excitation_gain: Vec<f64>,
    /// ∠H_e(ω), rad.
    pub excitation_phase: Vec<f64>,
    /// Infinite-frequency added mass, kg.
    pub m_inf: f64,
    /// Body mass, kg.
    pub mass: f64,
    /// Hydrostatic stiffness, N/m.
    pub stiffness: f64,
    /// Body radius, m.
    pub radius: f64,
}

/// Coefficients interpolated at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeffs {
    pub added_mass: f64,
    pub damping: f64,
    pub excitation: Complex64,
}

impl HydroTable {
    pub fn validate(&self) -> Result<()> {
        let n = self.omega.len();
        if n < 2 {
            return Err(Error::InvalidHydro("grid needs at least two frequencies"));
        }
        if [
            self.added_mass.len(),
            self.radiation_damping.len(),
            self.excitation_gain.len(),
            self.excitation_phase.len(),
        ]
        .iter()
        .any(|&l| l != n)
        {
            return Err(Error::InvalidHydro("coefficient arrays differ in length"));
        }
        if !(self.omega[0] > 0.0) || self.omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidHydro("grid must be positive and strictly increasing"));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !(finite(&self.added_mass)
            && finite(&self.radiation_damping)
            && finite(&self.excitation_gain)
            && finite(&self.excitation_phase))
        {
            return Err(Error::InvalidHydro("non-finite coefficient"));
        }
        if self.radiation_damping.iter().any(|b| *b < 0.0) {
            return Err(Error::InvalidHydro("radiation damping must be non-negative"));
        }
        if !(self.mass > 0.0 && self.stiffness > 0.0 && self.radius > 0.0 && self.m_inf >= 0.0) {
            return Err(Error::InvalidHydro("mass, stiffness and radius must be positive"));
        }
        if self.added_mass.iter().any(|a| self.mass + a <= 0.0) || self.mass + self.m_inf <= 0.0 {
            return Err(Error::InvalidHydro("total mass must be positive"));
        }
        Ok(())
    }

    /// `m + m_r(∞)`, the inertia of the time-domain model.
    pub fn total_inertia(&self) -> f64 {
        self.mass + self.m_inf
    }

    /// Piecewise-linear coefficients at `w > 0`. Below the grid the first node
    /// is used; above it B_r is 0, m_r is m_r(∞) and H_e keeps its last value.
    pub fn interp(&self, w: f64) -> Coeffs {
        let n = self.omega.len();
        let excitation = |i: usize, j: usize, a: f64| {
            let g = self.excitation_gain[i] * (1.0 - a) + self.excitation_gain[j] * a;
            let p = self.excitation_phase[i] * (1.0 - a) + self.excitation_phase[j] * a;
            Complex64::from_polar(g, p)
        };
        if w <= self.omega[0] {
            return Coeffs {
                added_mass: self.added_mass[0],
                damping: self.radiation_damping[0],
                excitation: excitation(0, 0, 0.0),
            };
        }
        if w >= self.omega[n - 1] {
            let at_end = w == self.omega[n - 1];
            return Coeffs {
                added_mass: if at_end { self.added_mass[n - 1] } else { self.m_inf },
                damping: if at_end { self.radiation_damping[n - 1] } else { 0.0 },
                excitation: excitation(n - 1, n - 1, 0.0),
            };
        }
        let j = self.omega.partition_point(|&x| x <= w);
        let i = j - 1;
        let a = (w - self.omega[i]) / (self.omega[j] - self.omega[i]);
        Coeffs {
            added_mass: self.added_mass[i] * (1.0 - a) + self.added_mass[j] * a,
            damping: self.radiation_damping[i] * (1.0 - a) + self.radiation_damping[j] * a,
            excitation: excitation(i, j, a),
        }
    }

    /// `ω²(m + m_r(ω)) - S`; zero at the heave resonance.
    pub fn reactance_residual(&self, w: f64) -> f64 {
        w * w * (self.mass + self.interp(w).added_mass) - self.stiffness
    }

    /// Lowest root of the resonance identity inside the grid, by bisection on
    /// the interpolated coefficients.
    pub fn resonance_frequency(&self) -> Option<f64> {
        let g = |w: f64| self.reactance_residual(w);
        let bracket = self.omega.windows(2).find(|p| g(p[0]) <= 0.0 && g(p[1]) >= 0.0)?;
        let (mut lo, mut hi) = (bracket[0], bracket[1]);
        if g(lo) == 0.0 {
            return Some(lo);
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }
}

/// `S = ρ g π r²` for a vertical cylinder.
pub fn buoyancy_stiffness(rho: f64, g: f64, r: f64) -> f64 {
    rho * g * PI * r * r
}

/// Sampled radiation impulse response `h_r(k·dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiationKernel {
    dt: f64,
    taps: Vec<f64>,
    memory_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    /// Taps are kept until |h_r| stays below this fraction of its peak.
    pub decay_tol: f64,
    /// Longest admissible memory (s).
    pub horizon_s: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self { decay_tol: 1e-3, horizon_s: 60.0 }
    }
}

impl RadiationKernel {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn memory_length(&self) -> f64 {
        self.memory_length
    }

    /// Linear interpolation between taps, zero past the memory.
    pub fn at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let s = t / self.dt;
        let i = libm::floor(s) as usize;
        if i + 1 >= self.taps.len() {
            return if i + 1 == self.taps.len() && s == i as f64 { self.taps[i] } else { 0.0 };
        }
        let a = s - i as f64;
        self.taps[i] * (1.0 - a) + self.taps[i + 1] * a
    }

    /// `∫ h_r(t) cos(ωt) dt` over the stored taps; recovers B_r(ω).
    pub fn cosine_transform(&self, w: f64) -> f64 {
        let y: Vec<f64> = self.taps.iter().enumerate().map(|(k, h)| h * libm::cos(w * k as f64 * self.dt)).collect();
        crate::series::trapezoid_uniform(&y, self.dt)
    }
}

/// `h_r(t) = (2/π) ∫ B_r(ω) cos(ωt) dω`, trapezoidal on the table grid.
pub fn radiation_kernel(table: &HydroTable, dt: f64) -> Result<RadiationKernel> {
    radiation_kernel_with(table, dt, KernelOptions::default())
}

pub fn radiation_kernel_with(table: &HydroTable, dt: f64, opts: KernelOptions) -> Result<RadiationKernel> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument("kernel dt must be positive"));
    }
    let n = libm::floor(opts.horizon_s / dt) as usize + 1;
    let mut buf = Vec::with_capacity(table.omega.len());
    let raw: Vec<f64> = (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            buf.clear();
            buf.extend(table.omega.iter().zip(&table.radiation_damping).map(|(&w, &b)| b * libm::cos(w * t)));
            2.0 / PI * trapezoid(&table.omega, &buf)
        })
        .collect();

    let peak = raw.iter().fold(0.0f64, |m, h| m.max(h.abs()));
    if peak == 0.0 {
        return Ok(RadiationKernel { dt, taps: alloc::vec![0.0; 2], memory_length: 0.0 });
    }
    let last_big = raw.iter().rposition(|h| h.abs() >= opts.decay_tol * peak).unwrap_or(0);
    // the tail must stay quiet for the last tenth of the horizon
    if last_big + n / 10 >= n {
        return Err(Error::NonDecayingKernel { limit_s: opts.horizon_s });
    }
    let keep = last_big + 2;
    Ok(RadiationKernel { dt, taps: raw[..keep].to_vec(), memory_length: (last_big + 1) as f64 * dt })
}

/// Non-causal excitation force from the whole elevation record, evaluated in
/// the frequency domain (record treated as one period).
pub fn excitation_force(table: &HydroTable, zeta: &TimeSeries) -> Result<TimeSeries> {
    const MIN: usize = 64;
    if zeta.len() < MIN {
        return Err(Error::InsufficientData { needed: MIN, got: zeta.len() });
    }
    let n = zeta.len();
    let mut spec = fft_real(zeta.values());
    let w0 = table.omega[0];
    for (k, z) in spec.iter_mut().enumerate() {
        let w = bin_omega(k, n, zeta.dt());
        let h = table.interp(w.abs().max(w0)).excitation;
        *z *= if w < 0.0 { h.conj() } else { h };
    }
    ifft(&mut spec);
    zeta.with_values(spec.iter().map(|z| z.re).collect())
}

/// Parameters of the shipped sample cylinder (r = 5 m, m = 3.2e5 kg,
/// heave resonance 1.2 rad/s).
pub mod sample {
    use super::*;

    pub const RADIUS: f64 = 5.0;
    pub const MASS: f64 = 3.2e5;
    pub const RESONANCE: f64 = 1.2;
    /// Radiation impedance `K(s) = c s / (s² + 2ζω_n s + ω_n²)`.
    pub const IMPEDANCE_GAIN: f64 = 9.6e4;
    pub const IMPEDANCE_DAMPING: f64 = 0.6;
    pub const IMPEDANCE_NATURAL: f64 = 1.0;
    /// Depth scale of the low-pass excitation gain `S exp(-ω² d / g)`.
    pub const EXCITATION_DEPTH: f64 = 12.0;
    pub const GRID_STEP: f64 = 0.02;
    pub const GRID_LEN: usize = 750;

    /// `K(jω)`: real part is B_r(ω), imaginary part is ω (m_r(ω) - m_r(∞)).
    pub fn radiation_impedance(w: f64) -> Complex64 {
        let s = Complex64::new(0.0, w);
        let wn = IMPEDANCE_NATURAL;
        IMPEDANCE_GAIN * s / (s * s + 2.0 * IMPEDANCE_DAMPING * wn * s + wn * wn)
    }

    /// A synthetic table whose added mass and damping come from one rational
    /// radiation impedance, so they are Kramers-Kronig consistent and the
    /// time-domain model reproduces the tabulated resonance. m_r(∞) is chosen
    /// to put the resonance exactly at [`RESONANCE`].
    pub fn cylinder_sample() -> HydroTable {
        let stiffness = buoyancy_stiffness(RHO_SEA, GRAVITY, RADIUS);
        let wr = RESONANCE;
        let m_inf = stiffness / (wr * wr) - MASS - radiation_impedance(wr).im / wr;
        let omega: Vec<f64> = (1..=GRID_LEN).map(|i| i as f64 * GRID_STEP).collect();
        let added_mass = omega.iter().map(|&w| m_inf + radiation_impedance(w).im / w).collect();
        let radiation_damping = omega.iter().map(|&w| radiation_impedance(w).re).collect();
        let excitation_gain =
            omega.iter().map(|&w| stiffness * libm::exp(-w * w * EXCITATION_DEPTH / GRAVITY)).collect();
        let excitation_phase = alloc::vec![0.0; GRID_LEN];
        HydroTable {
            omega,
            added_mass,
            radiation_damping,
            excitation_gain,
            excitation_phase,
            m_inf,
            mass: MASS,
            stiffness,
            radius: RADIUS,
        }
    }
}

pub use sample::cylinder_sample;

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small_table() -> HydroTable {
        HydroTable {
            omega: vec![0.5, 1.0, 1.5],
            added_mass: vec![3.0e5, 2.5e5, 2.2e5],
            radiation_damping: vec![100.0, 200.0, 50.0],
            excitation_gain: vec![1.0e5, 8.0e4, 5.0e4],
            excitation_phase: vec![0.0, 0.1, 0.2],
            m_inf: 2.0e5,
            mass: 3.2e5,
            stiffness: 7.9e5,
            radius: 5.0,
        }
    }

    #[test]
    fn interp_node_midpoint_and_clamps() {
        let t = small_table();
        let c = t.interp(1.0);
        assert_eq!(c.added_mass, 2.5e5);
        assert_eq!(c.damping, 200.0);
        assert_eq!(t.interp(0.75).damping, 150.0);
        let hi = t.interp(3.0);
        assert_eq!(hi.added_mass, 2.0e5);
        assert_eq!(hi.damping, 0.0);
        let lo = t.interp(0.1);
        assert_eq!(lo.damping, 100.0);
        assert_eq!(t.interp(1.5).damping, 50.0);
    }

    #[test]
    fn stiffness_of_sample_cylinder() {
        let s = buoyancy_stiffness(1025.0, 9.81, 5.0);
        // 1025 * 9.81 * π * 25
        assert!((s - 789_737.488).abs() < 1e-2);
        assert!(buoyancy_stiffness(1025.0, 9.81, 1e-9) < 1e-6);
    }

    #[test]
    fn sample_table_is_valid_and_resonant_at_1_2() {
        let t = cylinder_sample();
        t.validate().unwrap();
        let wr = t.resonance_frequency().unwrap();
        assert!((wr - 1.2).abs() < 1e-6, "{wr}");
        // ω² (m + m_r) = S at 1.2 rad/s gives m_r ≈ 2.28e5 kg
        assert!((t.interp(1.2).added_mass - 2.284e5).abs() < 1e3);
        let peak = t.radiation_damping.iter().cloned().fold(0.0, f64::max);
        assert!(t.radiation_damping[0] < 0.01 * peak);
        assert!(*t.radiation_damping.last().unwrap() < 0.01 * peak);
    }

    #[test]
    fn validation_catches_bad_tables() {
        let mut t = small_table();
        t.radiation_damping[1] = -1.0;
        assert!(t.validate().is_err());
        let mut t = small_table();
        t.omega[2] = 0.9;
        assert!(t.validate().is_err());
        let mut t = small_table();
        t.excitation_gain.pop();
        assert!(t.validate().is_err());
    }

    #[test]
    fn zero_damping_gives_zero_kernel() {
        let mut t = small_table();
        t.radiation_damping = vec![0.0; 3];
        let k = radiation_kernel(&t, 0.1).unwrap();
        assert!(k.taps().iter().all(|h| *h == 0.0));
    }

    #[test]
    fn kernel_origin_is_scaled_damping_integral() {
        let t = cylinder_sample();
        let k = radiation_kernel(&t, 0.05).unwrap();
        let expected = 2.0 / PI * trapezoid(&t.omega, &t.radiation_damping);
        assert!((k.taps()[0] - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn kernel_from_even_extension_matches() {
        // (1/π) ∫_{-∞}^{∞} B_r(|ω|) e^{iωt} dω on the mirrored grid
        let t = cylinder_sample();
        let k = radiation_kernel(&t, 0.25).unwrap();
        let mut w: Vec<f64> = t.omega.iter().rev().map(|x| -x).collect();
        w.extend_from_slice(&t.omega);
        let mut b: Vec<f64> = t.radiation_damping.iter().rev().cloned().collect();
        b.extend_from_slice(&t.radiation_damping);
        for (i, h) in k.taps().iter().enumerate().step_by(7) {
            let tt = i as f64 * 0.25;
            let re: Vec<f64> = w.iter().zip(&b).map(|(x, y)| y * libm::cos(x * tt)).collect();
            let im: Vec<f64> = w.iter().zip(&b).map(|(x, y)| y * libm::sin(x * tt)).collect();
            // the mirrored grid adds one trapezoid across (-ω0, ω0)
            let gap = 2.0 * t.omega[0] * t.radiation_damping[0] * libm::cos(t.omega[0] * tt) / PI;
            let full = trapezoid(&w, &re) / PI;
            assert!((full - gap - h).abs() < 1e-9 * k.taps()[0], "t={tt}");
            assert!(trapezoid(&w, &im).abs() < 1e-6 * k.taps()[0]);
        }
    }

    #[test]
    fn pure_gain_excitation() {
        let mut t = small_table();
        t.excitation_gain = vec![3.5; 3];
        t.excitation_phase = vec![0.0; 3];
        let z = TimeSeries::from_fn(0.0, 0.5, 300, |x| libm::sin(0.7 * x) + 0.2 * libm::cos(2.1 * x)).unwrap();
        let f = excitation_force(&t, &z).unwrap();
        for (a, b) in f.values().iter().zip(z.values()) {
            assert!((a - 3.5 * b).abs() <= 1e-9 * 3.5 * 1.2);
        }
    }

    #[test]
    fn excitation_of_zero_is_zero_and_short_is_error() {
        let t = cylinder_sample();
        let z = TimeSeries::new(0.0, 0.5, vec![0.0; 128]).unwrap();
        assert!(excitation_force(&t, &z).unwrap().values().iter().all(|v| *v == 0.0));
        let z = TimeSeries::new(0.0, 0.5, vec![0.0; 10]).unwrap();
        assert!(excitation_force(&t, &z).is_err());
    }
}
