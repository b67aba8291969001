use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what}: argument {value} outside domain ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("level {n} not found below scan ceiling {ceiling}")]
    LevelNotFound { n: usize, ceiling: f64 },

    #[error(
        "bisection did not converge after {iterations} iterations; last interval [{lo}, {hi}]"
    )]
    NoConvergence { lo: f64, hi: f64, iterations: usize },

    #[error("invalid orbit symbol {0:?}; expected 'L' or 'R'")]
    InvalidSymbol(char),

    #[error("empty orbit word")]
    EmptyWord,

    #[error("necklace length {len} exceeds enumeration cap {cap}")]
    EnumerationCap { len: usize, cap: usize },

    #[error(
        "quadrature unresolved for orbit {orbit} (nu = {nu}) after {panels} panels: \
         last change {delta:e} > tolerance {tol:e}"
    )]
    Quadrature {
        orbit: String,
        nu: u32,
        panels: usize,
        delta: f64,
        tol: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
