//! Wave-elevation records and spectra: moments, sea-state statistics, PSD
//! estimation, random-phase synthesis and band-limited resampling.

mod psd;
mod sea;
mod spectrum;

pub use psd::{estimate_spectrum, estimate_spectrum_with, resample_fourier, WelchOptions};
pub use sea::{synthesize_sea, SeaShape, SeaState};
pub use spectrum::{spectral_moments, spectral_stats, SpectralStats, Spectrum};
