use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::trapezoid;

/// One-sided spectral density on an ascending angular-frequency grid.
///
/// Units are m²·s/rad for elevation and N²·s/rad for force.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSpectrum"))]
pub struct Spectrum {
    omega: Vec<f64>,
    density: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawSpectrum {
    omega: Vec<f64>,
    density: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSpectrum> for Spectrum {
    type Error = Error;

    fn try_from(r: RawSpectrum) -> Result<Self> {
        Spectrum::new(r.omega, r.density)
    }
}

impl Spectrum {
    pub fn new(omega: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if omega.len() < 2 {
            return Err(Error::InvalidSpectrum("grid needs at least two points"));
        }
        if omega.len() != density.len() {
            return Err(Error::InvalidSpectrum("omega and density lengths differ"));
        }
        if !(omega[0] > 0.0) {
            return Err(Error::InvalidSpectrum("first grid frequency must be positive"));
        }
        if omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSpectrum("grid must be strictly increasing"));
        }
        if density.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::InvalidSpectrum("density must be finite and non-negative"));
        }
        Ok(Self { omega, density })
    }

    /// Discrete lines `(omega, variance)` embedded in a grid so that the
    /// trapezoidal moments of the result are exact: each line becomes a
    /// triangle of half-width `half_width` whose apex is the only non-zero
    /// node.
    pub fn from_lines(lines: &[(f64, f64)], half_width: f64) -> Result<Self> {
        let mut sorted: Vec<(f64, f64)> = lines.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut omega = Vec::with_capacity(3 * sorted.len());
        let mut density = Vec::with_capacity(3 * sorted.len());
        for (w, var) in sorted {
            omega.extend_from_slice(&[w - half_width, w, w + half_width]);
            density.extend_from_slice(&[0.0, var / half_width, 0.0]);
        }
        Self::new(omega, density)
    }

    /// Samples `f` on `n` evenly spaced points of `[lo, hi]`.
    pub fn from_fn(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(Error::InvalidSpectrum("bad grid bounds"));
        }
        let step = (hi - lo) / (n - 1) as f64;
        let omega: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
        let density = omega.iter().map(|&w| f(w)).collect();
        Self::new(omega, density)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Multiplies the density by `gain(omega)²`, e.g. to turn a wave spectrum
    /// into an excitation-force spectrum.
    pub fn filtered(&self, gain: impl Fn(f64) -> f64) -> Result<Self> {
        let density = self
            .omega
            .iter()
            .zip(&self.density)
            .map(|(&w, &d)| {
                let g = gain(w);
                d * g * g
            })
            .collect();
        Self::new(self.omega.clone(), density)
    }

    pub fn scaled(&self, a: f64) -> Result<Self> {
        Self::new(self.omega.clone(), self.density.iter().map(|d| a * d).collect())
    }

    /// Quadrature weights of the trapezoidal rule on this grid.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.omega.len();
        (0..n)
            .map(|i| {
                let lo = if i == 0 { self.omega[0] } else { self.omega[i - 1] };
                let hi = if i + 1 == n { self.omega[n - 1] } else { self.omega[i + 1] };
                0.5 * (hi - lo)
            })
            .collect()
    }

    pub fn moment(&self, n: i32) -> f64 {
        let weighted: Vec<f64> =
            self.omega.iter().zip(&self.density).map(|(&w, &d)| d * libm::pow(w, n as f64)).collect();
        trapezoid(&self.omega, &weighted)
    }

    /// Grid frequency of the density maximum (first one on ties).
    pub fn peak_frequency(&self) -> f64 {
        let mut best = 0;
        for (i, d) in self.density.iter().enumerate() {
            if *d > self.density[best] {
                best = i;
            }
        }
        self.omega[best]
    }
}

/// `m_n = ∫ ωⁿ S(ω) dω` by the trapezoidal rule on the spectrum grid.
pub fn spectral_moments(s: &Spectrum, n: i32) -> f64 {
    s.moment(n)
}

/// Sea-state statistics of a spectrum.
///
/// `omega_1` is the mean centroid frequency `m1/m0` (rad/s). The ratio is
/// sometimes printed as `m0/m1`, which is a period, not a frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralStats {
    pub hs: f64,
    pub omega_p: f64,
    pub omega_e: f64,
    pub omega_1: f64,
    pub m_minus1: f64,
    pub m0: f64,
    pub m1: f64,
}

pub fn spectral_stats(s: &Spectrum) -> Result<SpectralStats> {
    let m0 = s.moment(0);
    if !(m0 > 0.0) {
        return Err(Error::DegenerateSpectrum);
    }
    let m_minus1 = s.moment(-1);
    let m1 = s.moment(1);
    Ok(SpectralStats {
        hs: 4.0 * libm::sqrt(m0),
        omega_p: s.peak_frequency(),
        omega_e: m0 / m_minus1,
        omega_1: m1 / m0,
        m_minus1,
        m0,
        m1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_line() -> Spectrum {
        Spectrum::from_lines(&[(1.047, 2.0), (0.785, 0.5)], 0.01).unwrap()
    }

    #[test]
    fn two_line_moments() {
        let s = two_line();
        assert!((spectral_moments(&s, 0) - 2.5).abs() < 1e-12);
        // 2*1.047 + 0.5*0.785
        assert!((spectral_moments(&s, 1) - 2.4865).abs() < 1e-12);
    }

    #[test]
    fn two_line_stats() {
        let st = spectral_stats(&two_line()).unwrap();
        assert!((st.hs - 6.324_555).abs() < 1e-5);
        // 2.5 / (2/1.047 + 0.5/0.785)
        assert!((st.omega_e - 0.981_485).abs() < 1e-5);
        assert!((st.omega_1 - 0.9946).abs() < 1e-12);
        assert_eq!(st.omega_p, 1.047);
    }

    #[test]
    fn zero_density_has_zero_moments() {
        let s = Spectrum::new(vec![0.5, 1.0, 1.5], vec![0.0; 3]).unwrap();
        assert_eq!(spectral_moments(&s, 0), 0.0);
        assert_eq!(spectral_stats(&s), Err(Error::DegenerateSpectrum));
    }

    #[test]
    fn monochromatic_frequencies_coincide() {
        let s = Spectrum::from_lines(&[(0.9, 1.3)], 0.05).unwrap();
        let st = spectral_stats(&s).unwrap();
        assert!((st.omega_e - 0.9).abs() < 1e-12);
        assert!((st.omega_1 - 0.9).abs() < 1e-12);
        assert_eq!(st.omega_p, 0.9);
    }

    #[test]
    fn invalid_grids() {
        assert!(Spectrum::new(vec![], vec![]).is_err());
        assert!(Spectrum::new(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(Spectrum::new(vec![1.0, 0.5], vec![1.0, 1.0]).is_err());
        assert!(Spectrum::new(vec![0.5, 1.0], vec![1.0, -1.0]).is_err());
    }
}
