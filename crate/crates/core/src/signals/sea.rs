use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::Spectrum;
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Parametric wave spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SeaShape {
    /// Single-peaked Bretschneider (two-parameter Pierson-Moskowitz).
    Bretschneider { hs: f64, omega_p: f64 },
    /// Swell plus wind sea, each a Bretschneider component.
    TwoPeak { hs_swell: f64, omega_swell: f64, hs_wind: f64, omega_wind: f64 },
}

/// Grid used when a parametric shape is discretized. 0.002 rad/s keeps the
/// synthesized record aperiodic over ~52 min.
pub const SEA_GRID: (f64, f64, usize) = (0.2, 3.5, 1651);

fn bretschneider(w: f64, hs: f64, wp: f64) -> f64 {
    if w <= 0.0 || hs <= 0.0 {
        return 0.0;
    }
    let r = wp / w;
    let r4 = r * r * r * r;
    5.0 / 16.0 * hs * hs * r4 / w * libm::exp(-1.25 * r4)
}

impl SeaShape {
    pub fn density(&self, w: f64) -> f64 {
        match *self {
            SeaShape::Bretschneider { hs, omega_p } => bretschneider(w, hs, omega_p),
            SeaShape::TwoPeak { hs_swell, omega_swell, hs_wind, omega_wind } => {
                bretschneider(w, hs_swell, omega_swell) + bretschneider(w, hs_wind, omega_wind)
            }
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        let (lo, hi, n) = SEA_GRID;
        Spectrum::from_fn(lo, hi, n, |w| self.density(w))
    }

    /// Desk-scale stand-ins for six recorded sea states: a narrowband swell
    /// (`S1`), a wide two-peak mixed sea (`S2`) and four intermediate cases.
    pub fn preset(name: &str) -> Option<Self> {
        let two = |hs_swell, omega_swell, hs_wind, omega_wind| SeaShape::TwoPeak {
            hs_swell,
            omega_swell,
            hs_wind,
            omega_wind,
        };
        Some(match name {
            "S1" => two(1.15, 0.52, 0.5, 0.95),
            "S2" => two(0.75, 0.62, 1.2, 1.22),
            "S3" => two(0.85, 0.52, 0.8, 1.25),
            "S4" => two(1.05, 0.57, 0.9, 1.35),
            "S5" => two(1.15, 0.74, 0.8, 1.3),
            "S6" => two(1.5, 0.93, 0.6, 1.5),
            _ => return None,
        })
    }

    pub const PRESETS: [&'static str; 6] = ["S1", "S2", "S3", "S4", "S5", "S6"];
}

/// A named sea: shape plus the seed of its random phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeaState {
    pub shape: SeaShape,
    pub seed: u64,
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Random-phase harmonic superposition, one component per spectrum node:
/// `ζ(t) = Σ sqrt(2 S_k Δω_k) cos(ω_k t + φ_k)` with `Δω_k` the trapezoidal
/// weight of node `k`, so the record variance tends to `m0`.
pub fn synthesize_sea(spec: &Spectrum, duration: f64, dt: f64, seed: u64) -> Result<TimeSeries> {
    if !(dt > 0.0) || !(duration > 0.0) {
        return Err(Error::InvalidArgument("duration and dt must be positive"));
    }
    let omega_max = *spec.omega().last().unwrap_or(&0.0);
    if PI / dt < omega_max {
        return Err(Error::Aliasing { dt, omega_max });
    }
    let n = libm::round(duration / dt) as usize;
    if n < 2 {
        return Err(Error::InvalidArgument("record needs at least two samples"));
    }
    let m0 = spec.moment(0);
    if m0 == 0.0 {
        return TimeSeries::new(0.0, dt, vec![0.0; n]);
    }
    let needed = 100.0 * 2.0 * PI / spec.peak_frequency();
    if duration < needed {
        return Err(Error::RecordTooShort { needed, got: duration });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = spec.weights();
    let components: Vec<(f64, f64, f64)> = spec
        .omega()
        .iter()
        .zip(spec.density())
        .zip(&weights)
        .map(|((&w, &d), &q)| (w, libm::sqrt(2.0 * d * q), 2.0 * PI * uniform(&mut rng)))
        .filter(|(_, a, _)| *a > 0.0)
        .collect();

    let mut values = vec![0.0; n];
    for (w, a, phase) in components {
        // rotate a phasor instead of calling cos per sample; re-anchor every
        // 256 samples to bound drift
        let step = (libm::cos(w * dt), libm::sin(w * dt));
        let mut k = 0;
        while k < n {
            let arg = w * k as f64 * dt + phase;
            let (mut c, mut s) = (libm::cos(arg), libm::sin(arg));
            for v in values.iter_mut().skip(k).take(256) {
                *v += a * c;
                let c2 = c * step.0 - s * step.1;
                s = s * step.0 + c * step.1;
                c = c2;
            }
            k += 256;
        }
    }
    TimeSeries::new(0.0, dt, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{estimate_spectrum, spectral_stats};

    #[test]
    fn two_line_variance() {
        let s = Spectrum::from_lines(&[(1.047, 2.0), (0.785, 0.5)], 0.001).unwrap();
        let x = synthesize_sea(&s, 1800.0, 0.78125, 7).unwrap();
        assert!((x.variance() - 2.5).abs() < 0.05, "{}", x.variance());
    }

    #[test]
    fn zero_spectrum_gives_zero_series() {
        let s = Spectrum::new(vec![0.5, 1.0], vec![0.0, 0.0]).unwrap();
        let x = synthesize_sea(&s, 100.0, 0.5, 1).unwrap();
        assert!(x.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn deterministic_per_seed() {
        let s = SeaShape::preset("S1").unwrap().spectrum().unwrap();
        let a = synthesize_sea(&s, 1800.0, 0.78125, 3).unwrap();
        let b = synthesize_sea(&s, 1800.0, 0.78125, 3).unwrap();
        let c = synthesize_sea(&s, 1800.0, 0.78125, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn bretschneider_hs_recovered() {
        let shape = SeaShape::Bretschneider { hs: 1.43, omega_p: 1.22 };
        let s = shape.spectrum().unwrap();
        let x = synthesize_sea(&s, 1800.0, 0.78125, 11).unwrap();
        let hs = 4.0 * libm::sqrt(x.variance());
        assert!((hs - 1.43).abs() < 0.143, "hs {hs}");
        let est = spectral_stats(&estimate_spectrum(&x).unwrap()).unwrap();
        assert!((est.omega_p - 1.22).abs() < 0.1);
    }

    #[test]
    fn aliasing_and_short_records_rejected() {
        let s = SeaShape::preset("S2").unwrap().spectrum().unwrap();
        assert!(matches!(synthesize_sea(&s, 1800.0, 1.0, 1), Err(Error::Aliasing { .. })));
        assert!(matches!(synthesize_sea(&s, 60.0, 0.5, 1), Err(Error::RecordTooShort { .. })));
    }

    #[test]
    fn phasor_rotation_matches_direct_cosine() {
        let s = Spectrum::from_lines(&[(0.9, 0.5)], 0.001).unwrap();
        let x = synthesize_sea(&s, 2000.0, 0.1, 5).unwrap();
        // a single non-zero component: amplitude 1, some phase
        let a = libm::sqrt(2.0 * 0.5);
        let phase = libm::atan2(-x.values()[1] + x.values()[0] * libm::cos(0.09), x.values()[0] * libm::sin(0.09));
        for k in (0..x.len()).step_by(997) {
            let t = x.time(k);
            assert!((x.values()[k] - a * libm::cos(0.9 * t + phase)).abs() < 1e-9);
        }
    }
}
