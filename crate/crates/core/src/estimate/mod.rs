//! Frequency trackers for the excitation force.

pub mod ekf;
pub mod fll;
pub mod hht;

pub use ekf::{ekf_run, EkfConfig, EkfState, EkfStep};
pub use fll::{fll_run, normalize_sliding_rms, FllConfig, FllState};
pub use hht::{
    dominant_imf, emd_decompose, hht_run, hilbert_analytic, hilbert_spectrum, inst_frequency, Analytic, EmdOptions,
    FreqTrack, HhtConfig, ImfSet,
};

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::fft::fft;
use crate::series::TimeSeries;

/// Default admissible frequency band of all trackers (rad/s).
pub const OMEGA_MIN: f64 = 0.1;
pub const OMEGA_MAX: f64 = 3.0;

/// Peak of a Hann-windowed periodogram of the first `n` samples (zero-padded
/// to 1024 points), restricted to `[lo, hi]`. Used to seed the trackers.
pub fn coarse_peak_frequency(x: &TimeSeries, n: usize, lo: f64, hi: f64) -> f64 {
    const PAD: usize = 1024;
    let n = n.min(x.len()).min(PAD);
    let head = &x.values()[..n];
    let mean = head.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = (0..PAD)
        .map(|i| {
            if i < n {
                let w = 0.5 - 0.5 * libm::cos(2.0 * core::f64::consts::PI * i as f64 / (n - 1).max(1) as f64);
                Complex64::new((head[i] - mean) * w, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    fft(&mut buf);
    let dw = 2.0 * core::f64::consts::PI / (PAD as f64 * x.dt());
    let mut best = (f64::NEG_INFINITY, 0.5 * (lo + hi));
    for (k, z) in buf.iter().enumerate().take(PAD / 2 + 1).skip(1) {
        let w = k as f64 * dw;
        if w < lo || w > hi {
            continue;
        }
        let p = z.norm_sqr();
        if p > best.0 {
            best = (p, w);
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_peak_finds_tone() {
        let x = TimeSeries::from_fn(0.0, 0.78125, 400, |t| libm::cos(0.9 * t)).unwrap();
        let w = coarse_peak_frequency(&x, 128, OMEGA_MIN, OMEGA_MAX);
        assert!((w - 0.9).abs() < 0.01, "{w}");
    }

    #[test]
    fn coarse_peak_respects_band() {
        let x = TimeSeries::from_fn(0.0, 0.5, 256, |t| libm::cos(0.05 * t) + 0.1 * libm::cos(2.0 * t)).unwrap();
        let w = coarse_peak_frequency(&x, 128, 0.5, 3.0);
        assert!((0.5..=3.0).contains(&w));
    }
}
