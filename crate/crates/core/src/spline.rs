//! Natural cubic spline through scattered knots.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    /// Knots must be strictly increasing. Two knots give a straight line.
    pub fn natural(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::InvalidArgument("spline needs at least two matching knots"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("spline knots must be strictly increasing"));
        }
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior equations.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            let mut upper = vec![0.0; k];
            for i in 0..k {
                let h0 = x[i + 1] - x[i];
                let h1 = x[i + 2] - x[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
            }
            for i in 1..k {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { x, y, m })
    }

    fn eval_segment(&self, i: usize, t: f64) -> f64 {
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    fn segment(&self, t: f64) -> usize {
        let last = self.x.len() - 2;
        match self.x.partition_point(|&k| k <= t) {
            0 => 0,
            p => (p - 1).min(last),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_segment(self.segment(t), t)
    }

    /// Evaluates at `0, 1, .., n-1`; linear-time walk through the segments.
    pub fn eval_grid(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut seg = self.segment(0.0);
        let last = self.x.len() - 2;
        for i in 0..n {
            let t = i as f64;
            while seg < last && t >= self.x[seg + 1] {
                seg += 1;
            }
            out.push(self.eval_segment(seg, t));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots() {
        let x = vec![-2.0, 0.0, 1.5, 3.0, 7.0];
        let y = vec![1.0, -1.0, 2.0, 0.5, 4.0];
        let s = CubicSpline::natural(x.clone(), y.clone()).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((s.eval(*a) - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_lines_exactly() {
        let x: Vec<f64> = (0..6).map(|i| (i * i) as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 3.0).collect();
        let s = CubicSpline::natural(x, y).unwrap();
        for (i, v) in s.eval_grid(30).into_iter().enumerate() {
            assert!((v - (2.0 * i as f64 - 3.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_walk_matches_pointwise() {
        let x = vec![-3.0, 2.0, 5.5, 9.0, 20.0];
        let y = vec![0.0, 1.0, -1.0, 3.0, 2.0];
        let s = CubicSpline::natural(x, y).unwrap();
        let g = s.eval_grid(25);
        for (i, v) in g.iter().enumerate() {
            assert!((v - s.eval(i as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unsorted() {
        assert!(CubicSpline::natural(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(CubicSpline::natural(vec![0.0], vec![1.0]).is_err());
    }
}
