use num_complex::Complex64;
use thiserror::Error;

use crate::spaces::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` out of domain: {value}")]
    Domain { name: &'static str, value: f64 },

    #[error("integrand is not finite at node {node}")]
    NonFinite { node: Complex64 },

    #[error("width mismatch: gamma {left} vs gamma {right}")]
    WidthMismatch { left: f64, right: f64 },

    #[error("expected a function in the {expected} basis, got {found}")]
    Basis { expected: &'static str, found: Basis },

    #[error("{what}: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Inconsistent {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain { name, value })
    }
}
