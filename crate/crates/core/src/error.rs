use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid time series: {0}")]
    InvalidSeries(&'static str),
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(&'static str),
    #[error("degenerate spectrum: zeroth moment is zero")]
    DegenerateSpectrum,
    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("record too short: {got:.1} s, need at least {needed:.1} s")]
    RecordTooShort { needed: f64, got: f64 },
    #[error("sampling interval {dt} s aliases frequencies up to {omega_max} rad/s")]
    Aliasing { dt: f64, omega_max: f64 },
    #[error("invalid hydrodynamic table: {0}")]
    InvalidHydro(&'static str),
    #[error("radiation kernel has not decayed within {limit_s} s")]
    NonDecayingKernel { limit_s: f64 },
    #[error("innovation covariance is not invertible at sample {0}")]
    NumericalDegeneracy(usize),
    #[error("non-finite input sample at index {0}")]
    NonFiniteInput(usize),
    #[error("cannot normalize an all-zero record")]
    ZeroRecord,
    #[error("no intrinsic mode functions to choose from")]
    EmptyImfSet,
    #[error("simulation diverged at step {0}")]
    Divergence(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
