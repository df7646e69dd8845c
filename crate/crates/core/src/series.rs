use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniformly sampled real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidSeries("sample interval must be positive"));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidSeries("start time must be finite"));
        }
        if values.len() < 2 {
            return Err(Error::InvalidSeries("need at least two samples"));
        }
        Ok(Self { t0, dt, values })
    }

    /// Samples `f(t)` at `t0 + k*dt` for `k < n`.
    pub fn from_fn(t0: f64, dt: f64, n: usize, mut f: impl FnMut(f64) -> f64) -> Result<Self> {
        let values = (0..n).map(|k| f(t0 + k as f64 * dt)).collect();
        Self::new(t0, dt, values)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Record length `len * dt`.
    pub fn duration(&self) -> f64 {
        self.values.len() as f64 * self.dt
    }

    /// Same time base, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::InvalidSeries("length mismatch"));
        }
        Ok(Self { t0: self.t0, dt: self.dt, values })
    }

    pub fn map(&self, f: impl FnMut(&f64) -> f64) -> Self {
        Self { t0: self.t0, dt: self.dt, values: self.values.iter().map(f).collect() }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Population variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.values.len() as f64
    }

    pub fn rms(&self) -> f64 {
        libm::sqrt(self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64)
    }

    /// Mean of the samples with `t >= t0 + skip_s`. Falls back to the whole
    /// record when the skip covers everything.
    pub fn mean_after(&self, skip_s: f64) -> f64 {
        let start = libm::ceil((skip_s.max(0.0)) / self.dt) as usize;
        let tail = self.values.get(start..).filter(|s| !s.is_empty()).unwrap_or(&self.values);
        tail.iter().sum::<f64>() / tail.len() as f64
    }

    /// Trapezoidal integral over the record.
    pub fn integral(&self) -> f64 {
        trapezoid_uniform(&self.values, self.dt)
    }

    /// Linear interpolation, clamped to the end samples outside the record.
    pub fn interp(&self, t: f64) -> f64 {
        let s = (t - self.t0) / self.dt;
        let last = self.values.len() - 1;
        if !(s > 0.0) {
            return self.values[0];
        }
        if s >= last as f64 {
            return self.values[last];
        }
        let i = libm::floor(s) as usize;
        let a = s - i as f64;
        self.values[i] * (1.0 - a) + self.values[i + 1] * a
    }

    /// Linear resampling onto `dt` covering the same time span.
    pub fn resample_linear(&self, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument("resampling interval must be positive"));
        }
        let span = (self.values.len() - 1) as f64 * self.dt;
        let n = libm::floor(span / dt + 1e-9) as usize + 1;
        Self::from_fn(self.t0, dt, n.max(2), |t| self.interp(t))
    }
}

/// Trapezoidal rule for uniformly spaced samples.
pub fn trapezoid_uniform(y: &[f64], dx: f64) -> f64 {
    match y.len() {
        0 | 1 => 0.0,
        n => dx * (y.iter().sum::<f64>() - 0.5 * (y[0] + y[n - 1])),
    }
}

/// Trapezoidal rule on an arbitrary ascending grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_short_and_bad_dt() {
        assert!(TimeSeries::new(0.0, 1.0, vec![1.0]).is_err());
        assert!(TimeSeries::new(0.0, 0.0, vec![1.0, 2.0]).is_err());
        assert!(TimeSeries::new(0.0, f64::NAN, vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn duration_counts_samples() {
        let x = TimeSeries::new(0.0, 0.78125, vec![0.0; 2304]).unwrap();
        assert_eq!(x.duration(), 1800.0);
    }

    #[test]
    fn interp_and_resample() {
        let x = TimeSeries::new(1.0, 0.5, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(x.interp(1.25), 0.5);
        assert_eq!(x.interp(0.0), 0.0);
        assert_eq!(x.interp(9.0), 4.0);
        let y = x.resample_linear(0.25).unwrap();
        assert_eq!(y.len(), 5);
        assert_eq!(y.values()[3], 2.5);
    }

    #[test]
    fn trapezoid_rules_agree() {
        let y = [1.0, 3.0, 2.0, 5.0];
        let x = [0.0, 0.5, 1.0, 1.5];
        assert_eq!(trapezoid(&x, &y), trapezoid_uniform(&y, 0.5));
    }

    #[test]
    fn mean_after_skips_prefix() {
        let x = TimeSeries::new(0.0, 1.0, vec![100.0, 100.0, 1.0, 3.0]).unwrap();
        assert_eq!(x.mean_after(2.0), 2.0);
        assert_eq!(x.mean_after(1e9), 51.0);
    }
}
