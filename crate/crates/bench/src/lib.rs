//! File formats, benchmark configuration and the experiment harness around
//! `wec-core`.

pub mod config;
pub mod harness;
pub mod io;

pub use config::{BenchConfig, Method, SeaSource, SeaSpec};
pub use harness::{run_bench, BenchRun, CellOutcome, CellReport};
