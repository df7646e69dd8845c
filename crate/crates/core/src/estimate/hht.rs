//! Empirical mode decomposition and Hilbert instantaneous frequency.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fft::{fft_real, ifft};
use crate::series::{trapezoid_uniform, TimeSeries};
use crate::spline::CubicSpline;

use super::{OMEGA_MAX, OMEGA_MIN};

const MIN_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct HhtConfig {
    pub sd_threshold: f64,
    pub max_sift: usize,
    pub smoothing_s: f64,
    /// `None` means `floor(log2 N) − 1`.
    pub n_imf_max: Option<usize>,
    pub omega_min: f64,
    pub omega_max: f64,
}

impl Default for HhtConfig {
    fn default() -> Self {
        Self {
            sd_threshold: 0.2,
            max_sift: 100,
            smoothing_s: 2.0,
            n_imf_max: None,
            omega_min: OMEGA_MIN,
            omega_max: OMEGA_MAX,
        }
    }
}

impl HhtConfig {
    pub fn emd_options(&self) -> EmdOptions {
        EmdOptions { sd_threshold: self.sd_threshold, max_sift: self.max_sift }
    }
}

/// Sifting controls. A candidate is accepted once its extrema and zero
/// crossings differ by at most one and the RMS of its mean envelope is at
/// most `sd_threshold` times its own RMS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmdOptions {
    pub sd_threshold: f64,
    pub max_sift: usize,
}

impl Default for EmdOptions {
    fn default() -> Self {
        HhtConfig::default().emd_options()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImfSet {
    /// Highest frequency first.
    pub imfs: Vec<TimeSeries>,
    pub residue: TimeSeries,
    /// `∫ c_i² dt` per IMF.
    pub energies: Vec<f64>,
    /// `∫ f_e² dt` of the input.
    pub source_energy: f64,
    /// Sifting passes spent on each IMF; equal to `max_sift` when capped.
    pub sift_counts: Vec<usize>,
}

impl ImfSet {
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut sum = self.residue.values().to_vec();
        for c in &self.imfs {
            for (s, v) in sum.iter_mut().zip(c.values()) {
                *s += v;
            }
        }
        sum
    }

    pub fn energy_ratios(&self) -> Vec<f64> {
        self.energies.iter().map(|e| e / self.source_energy).collect()
    }
}

/// `floor(log2 n) − 1`.
pub fn default_imf_count(n: usize) -> usize {
    (usize::BITS - 1 - n.max(1).leading_zeros()).saturating_sub(1) as usize
}

pub(crate) fn local_extrema(x: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for i in 1..x.len().saturating_sub(1) {
        if x[i] > x[i - 1] && x[i] >= x[i + 1] {
            maxima.push(i);
        } else if x[i] < x[i - 1] && x[i] <= x[i + 1] {
            minima.push(i);
        }
    }
    (maxima, minima)
}

pub(crate) fn zero_crossings(x: &[f64]) -> usize {
    x.windows(2).filter(|w| (w[0] < 0.0) != (w[1] < 0.0)).count()
}

/// Spline through the extrema, with the two outermost extrema at each end
/// reflected about the end samples.
fn envelope(x: &[f64], idx: &[usize]) -> Result<Vec<f64>> {
    let n = x.len();
    let last = (n - 1) as f64;
    let edge = idx.len().min(2);
    let mut knots = Vec::with_capacity(idx.len() + 2 * edge);
    let mut vals = Vec::with_capacity(idx.len() + 2 * edge);
    for &i in idx[..edge].iter().rev() {
        knots.push(-(i as f64));
        vals.push(x[i]);
    }
    for &i in idx {
        knots.push(i as f64);
        vals.push(x[i]);
    }
    for &i in idx[idx.len() - edge..].iter().rev() {
        knots.push(2.0 * last - i as f64);
        vals.push(x[i]);
    }
    Ok(CubicSpline::natural(knots, vals)?.eval_grid(n))
}

fn mean_envelope(h: &[f64]) -> Option<Vec<f64>> {
    let (mx, mn) = local_extrema(h);
    if mx.is_empty() || mn.is_empty() || mx.len() + mn.len() < 4 {
        return None;
    }
    let up = envelope(h, &mx).ok()?;
    let lo = envelope(h, &mn).ok()?;
    Some(up.iter().zip(&lo).map(|(a, b)| 0.5 * (a + b)).collect())
}

fn is_imf_shape(h: &[f64]) -> bool {
    let (mx, mn) = local_extrema(h);
    (mx.len() + mn.len()).abs_diff(zero_crossings(h)) <= 1
}

fn sift(r: &[f64], opts: &EmdOptions) -> (Vec<f64>, usize) {
    let mut h = r.to_vec();
    for it in 0..opts.max_sift {
        let Some(m) = mean_envelope(&h) else {
            return (h, it);
        };
        let em: f64 = m.iter().map(|v| v * v).sum();
        let eh: f64 = h.iter().map(|v| v * v).sum();
        if is_imf_shape(&h) && em <= opts.sd_threshold * opts.sd_threshold * eh {
            return (h, it);
        }
        for (a, b) in h.iter_mut().zip(&m) {
            *a -= b;
        }
    }
    (h, opts.max_sift)
}

/// Sifts out IMFs until `n_max` are found or the residue has fewer than four
/// extrema.
pub fn emd_decompose(fe: &TimeSeries, n_max: usize, opts: &EmdOptions) -> Result<ImfSet> {
    if fe.len() < MIN_LEN {
        return Err(Error::InsufficientData { needed: MIN_LEN, got: fe.len() });
    }
    if let Some(i) = fe.values().iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput(i));
    }
    let dt = fe.dt();
    let sq = |v: &[f64]| trapezoid_uniform(&v.iter().map(|x| x * x).collect::<Vec<_>>(), dt);
    let mut r = fe.values().to_vec();
    let mut imfs = Vec::new();
    let mut energies = Vec::new();
    let mut sift_counts = Vec::new();
    while imfs.len() < n_max {
        let (mx, mn) = local_extrema(&r);
        if mx.is_empty() || mn.is_empty() || mx.len() + mn.len() < 4 {
            break;
        }
        let (c, count) = sift(&r, opts);
        for (a, b) in r.iter_mut().zip(&c) {
            *a -= b;
        }
        energies.push(sq(&c));
        sift_counts.push(count);
        imfs.push(fe.with_values(c)?);
    }
    Ok(ImfSet { imfs, residue: fe.with_values(r)?, energies, source_energy: sq(fe.values()), sift_counts })
}

/// Index of the largest IMF energy; ties go to the lower index.
pub fn dominant_imf(set: &ImfSet) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &e) in set.energies.iter().enumerate() {
        if best.is_none_or(|(_, b)| e > b) {
            best = Some((i, e));
        }
    }
    best.map(|b| b.0).ok_or(Error::EmptyImfSet)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analytic {
    pub amplitude: TimeSeries,
    /// Unwrapped.
    pub phase: TimeSeries,
}

/// Analytic signal by zeroing negative frequencies and doubling positive ones.
pub fn hilbert_analytic(c: &TimeSeries) -> Result<Analytic> {
    let n = c.len();
    if n < MIN_LEN {
        return Err(Error::InsufficientData { needed: MIN_LEN, got: n });
    }
    let mut z = fft_real(c.values());
    let half = n / 2;
    for (k, v) in z.iter_mut().enumerate() {
        let g = if k == 0 || (n.is_multiple_of(2) && k == half) {
            1.0
        } else if k <= half {
            2.0
        } else {
            0.0
        };
        *v *= g;
    }
    ifft(&mut z);
    let amplitude = z.iter().map(|v| v.norm()).collect();
    let mut phase = Vec::with_capacity(n);
    let mut offset = 0.0;
    let mut prev = 0.0;
    for (i, v) in z.iter().enumerate() {
        let p = libm::atan2(v.im, v.re);
        if i > 0 {
            let d = p - prev;
            if d > core::f64::consts::PI {
                offset -= 2.0 * core::f64::consts::PI;
            } else if d < -core::f64::consts::PI {
                offset += 2.0 * core::f64::consts::PI;
            }
        }
        prev = p;
        phase.push(p + offset);
    }
    Ok(Analytic { amplitude: c.with_values(amplitude)?, phase: c.with_values(phase)? })
}

/// Central-difference phase derivative, centred moving average over
/// `smoothing_s` (shrunk symmetrically at the ends), then clamped.
pub fn inst_frequency(phase: &TimeSeries, smoothing_s: f64, omega_min: f64, omega_max: f64) -> Result<TimeSeries> {
    let p = phase.values();
    let n = p.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let dt = phase.dt();
    let mut d = Vec::with_capacity(n);
    d.push((p[1] - p[0]) / dt);
    for i in 1..n - 1 {
        d.push((p[i + 1] - p[i - 1]) / (2.0 * dt));
    }
    d.push((p[n - 1] - p[n - 2]) / dt);

    let half = libm::round(smoothing_s / (2.0 * dt)).max(0.0) as usize;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in &d {
        prefix.push(prefix.last().unwrap() + v);
    }
    let out = (0..n)
        .map(|i| {
            let h = half.min(i).min(n - 1 - i);
            let s = if h == 0 { d[i] } else { (prefix[i + h + 1] - prefix[i - h]) / (2 * h + 1) as f64 };
            s.clamp(omega_min, omega_max)
        })
        .collect();
    phase.with_values(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreqTrack {
    pub omega: TimeSeries,
    pub amplitude: TimeSeries,
    pub dominant_index: usize,
}

/// Offline pipeline over the whole record: decompose, pick the dominant IMF,
/// take its instantaneous frequency.
pub fn hht_run(fe: &TimeSeries, cfg: &HhtConfig) -> Result<FreqTrack> {
    let set = emd_decompose(fe, cfg.n_imf_max.unwrap_or(default_imf_count(fe.len())), &cfg.emd_options())?;
    let dominant_index = dominant_imf(&set)?;
    let a = hilbert_analytic(&set.imfs[dominant_index])?;
    let omega = inst_frequency(&a.phase, cfg.smoothing_s, cfg.omega_min, cfg.omega_max)?;
    Ok(FreqTrack { omega, amplitude: a.amplitude, dominant_index })
}

/// `(t, ω, amplitude)` rows for every IMF of a decomposition.
pub fn hilbert_spectrum(set: &ImfSet, cfg: &HhtConfig) -> Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::new();
    for c in &set.imfs {
        let a = hilbert_analytic(c)?;
        let w = inst_frequency(&a.phase, cfg.smoothing_s, cfg.omega_min, cfg.omega_max)?;
        for k in 0..c.len() {
            rows.push((c.time(k), w.values()[k], a.amplitude.values()[k]));
        }
    }
    Ok(rows)
}
