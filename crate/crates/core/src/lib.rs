//! Energy levels of the asymmetric infinite square well computed three ways:
//! exact root finding on the matching condition, second-order
//! Rayleigh–Schrödinger perturbation theory, and the periodic-orbit sum over
//! ray-splitting orbits.

// `!(x > 0.0)` style guards deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exact;
pub mod model;
pub mod orbits;
pub mod perturbation;
pub mod quadrature;
pub mod series;
pub mod trace;

pub use error::{Error, Result};
pub use model::{LevelIndex, ReducedAction, WellConfig};
