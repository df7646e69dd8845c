//! Time-domain simulation of a heaving point absorber whose power take-off
//! is tuned on-line from an estimate of the excitation-force frequency.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command-line
//! harness and anything touching the filesystem live in `wec-bench`.
//!
//! Layout:
//!
//! * [`signals`]: sampled records, wave spectra, spectral statistics, sea
//!   synthesis and PSD estimation.
//! * [`hydro`]: hydrodynamic coefficient tables, the radiation memory kernel
//!   and the excitation force.
//! * [`estimate`]: the three frequency trackers (EKF, SOGI-FLL, EMD/Hilbert).
//! * [`control`]: passive and reactive tuning laws with force saturation.
//! * [`sim`]: the Cummins-equation integrator and power/energy metrics.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod control;
pub mod error;
pub mod estimate;
pub mod fft;
pub mod hydro;
pub mod series;
pub mod signals;
pub mod sim;
pub mod spline;

pub use error::{Error, Result};
pub use series::TimeSeries;

/// Sea water density (kg/m³).
pub const RHO_SEA: f64 = 1025.0;
/// Gravitational acceleration (m/s²).
pub const GRAVITY: f64 = 9.81;
