use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::Spectrum;
use crate::error::{Error, Result};
use crate::fft::{fft_real, ifft};
use crate::series::TimeSeries;

/// Segment-averaged periodogram settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchOptions {
    pub segment: usize,
    pub overlap: usize,
}

impl Default for WelchOptions {
    fn default() -> Self {
        Self { segment: 256, overlap: 128 }
    }
}

const MIN_SAMPLES: usize = 64;

/// One-sided PSD (per rad/s) with the default 256-sample, half-overlapping
/// Hann segments. Records shorter than a segment use the largest power of
/// two that fits.
pub fn estimate_spectrum(x: &TimeSeries) -> Result<Spectrum> {
    estimate_spectrum_with(x, WelchOptions::default())
}

pub fn estimate_spectrum_with(x: &TimeSeries, opts: WelchOptions) -> Result<Spectrum> {
    let n = x.len();
    if n < MIN_SAMPLES {
        return Err(Error::InsufficientData { needed: MIN_SAMPLES, got: n });
    }
    let seg = if n >= opts.segment { opts.segment } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
    if seg < 4 || opts.overlap >= opts.segment {
        return Err(Error::InvalidArgument("segment must exceed overlap"));
    }
    let step = if seg == opts.segment { opts.segment - opts.overlap } else { seg / 2 };

    let window: Vec<f64> = (0..seg).map(|i| 0.5 - 0.5 * libm::cos(2.0 * PI * i as f64 / seg as f64)).collect();
    let win_power: f64 = window.iter().map(|w| w * w).sum();

    let bins = seg / 2;
    let mut acc = vec![0.0; bins];
    let mut count = 0usize;
    let values = x.values();
    let mut start = 0;
    while start + seg <= n {
        let chunk = &values[start..start + seg];
        let mean = chunk.iter().sum::<f64>() / seg as f64;
        let tapered: Vec<f64> = chunk.iter().zip(&window).map(|(v, w)| (v - mean) * w).collect();
        let spec = fft_real(&tapered);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += spec[k + 1].norm_sqr();
        }
        count += 1;
        start += step;
    }

    let dt = x.dt();
    // |X|^2 dt / (2π Σw²) is the two-sided density per rad/s; fold to one side
    // except at Nyquist.
    let scale = dt / (2.0 * PI * win_power * count as f64);
    let omega: Vec<f64> = (1..=bins).map(|k| 2.0 * PI * k as f64 / (seg as f64 * dt)).collect();
    let density: Vec<f64> =
        acc.iter().enumerate().map(|(k, a)| if k + 1 == bins { a * scale } else { 2.0 * a * scale }).collect();
    Spectrum::new(omega, density)
}

/// Band-limited (trigonometric) interpolation of a record onto a finer grid.
///
/// The output has `round(len*dt/new_dt)` samples spanning the same period, so
/// its interval is `new_dt` up to rounding. The record is treated as one
/// period of a periodic signal.
pub fn resample_fourier(x: &TimeSeries, new_dt: f64) -> Result<TimeSeries> {
    if !(new_dt > 0.0) {
        return Err(Error::InvalidArgument("resampling interval must be positive"));
    }
    let n = x.len();
    let m = libm::round(x.duration() / new_dt) as usize;
    if m < n {
        return Err(Error::InvalidArgument("resample_fourier only upsamples"));
    }
    let spec = fft_real(x.values());
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    for k in 0..=half {
        if k == 0 {
            padded[0] = spec[0];
        } else if n.is_multiple_of(2) && k == half {
            // split the Nyquist bin between ±half
            padded[half] = spec[half] * 0.5;
            padded[m - half] = spec[half] * 0.5;
        } else {
            padded[k] = spec[k];
            padded[m - k] = spec[n - k];
        }
    }
    ifft(&mut padded);
    let ratio = m as f64 / n as f64;
    let values = padded.iter().map(|z| z.re * ratio).collect();
    TimeSeries::new(x.t0(), x.duration() / m as f64, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::spectral_stats;

    const TS: f64 = 0.78125;

    #[test]
    fn pure_tone_peak_and_parseval() {
        let x = TimeSeries::from_fn(0.0, TS, 2304, |t| libm::cos(1.0 * t)).unwrap();
        let s = estimate_spectrum(&x).unwrap();
        let peak = s.peak_frequency();
        let bin = s.omega()[1] - s.omega()[0];
        assert!((peak - 1.0).abs() <= bin, "peak {peak}");
        let m0 = s.moment(0);
        assert!((m0 - 0.5).abs() < 0.05 * 0.5, "m0 {m0}");
    }

    #[test]
    fn zero_signal_zero_density() {
        let x = TimeSeries::new(0.0, TS, vec![0.0; 512]).unwrap();
        let s = estimate_spectrum(&x).unwrap();
        assert!(s.density().iter().all(|d| *d == 0.0));
    }

    #[test]
    fn two_tones_variance_ratio() {
        let x =
            TimeSeries::from_fn(0.0, TS, 2304, |t| 2.0 * libm::cos(1.047 * t) + libm::cos(0.785 * t + 0.3)).unwrap();
        let s = estimate_spectrum(&x).unwrap();
        // integrate each peak over ±3 bins
        let band = |w0: f64| -> f64 {
            let wts = s.weights();
            s.omega()
                .iter()
                .zip(s.density())
                .zip(&wts)
                .filter(|((w, _), _)| (**w - w0).abs() < 0.1)
                .map(|((_, d), q)| d * q)
                .sum()
        };
        let ratio = band(1.047) / band(0.785);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
        let st = spectral_stats(&s).unwrap();
        assert!((st.omega_p - 1.047).abs() < 0.04);
    }

    #[test]
    fn short_records_rejected() {
        let x = TimeSeries::new(0.0, TS, vec![1.0; 40]).unwrap();
        assert!(matches!(estimate_spectrum(&x), Err(Error::InsufficientData { .. })));
        let y = TimeSeries::from_fn(0.0, TS, 100, libm::sin).unwrap();
        assert_eq!(estimate_spectrum(&y).unwrap().len(), 32);
    }

    #[test]
    fn fourier_resample_is_exact_for_periodic_tones() {
        let n = 128;
        let dt = 0.5;
        let w = 2.0 * PI * 5.0 / (n as f64 * dt);
        let x = TimeSeries::from_fn(0.0, dt, n, |t| libm::cos(w * t + 0.2)).unwrap();
        let y = resample_fourier(&x, dt / 8.0).unwrap();
        assert_eq!(y.len(), 8 * n);
        for (k, v) in y.values().iter().enumerate() {
            let t = y.time(k);
            assert!((v - libm::cos(w * t + 0.2)).abs() < 1e-9);
        }
    }
}
