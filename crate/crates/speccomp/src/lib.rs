//! Side-by-side comparison of the exact, second-order perturbative and
//! periodic-orbit spectra of the step well, with CSV, JSON, gnuplot and SVG
//! output.

pub mod compare;
pub mod config;
pub mod emit;
pub mod oracle;

pub use compare::{run_comparison, SpectrumRow};
pub use config::{Cli, ConfigError, RunConfig};
