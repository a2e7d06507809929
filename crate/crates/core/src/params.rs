use std::fmt;
use std::str::FromStr;

use crate::error::{check_positive, Result};

/// Width `γ` of the Gaussian RBF kernel together with the bound Fock
/// parameter `α = 2/γ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Width {
    gamma: f64,
    alpha: f64,
}

impl Width {
    pub fn new(gamma: f64) -> Result<Self> {
        let gamma = check_positive("gamma", gamma)?;
        Ok(Width {
            gamma,
            alpha: 2.0 / (gamma * gamma),
        })
    }

    pub fn from_alpha(alpha: f64) -> Result<Self> {
        let alpha = check_positive("alpha", alpha)?;
        Ok(Width {
            gamma: (2.0 / alpha).sqrt(),
            alpha,
        })
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn gamma_sq(&self) -> f64 {
        self.gamma * self.gamma
    }

    /// Two widths describe the same space.
    pub fn same_space(&self, other: &Width) -> bool {
        (self.alpha - other.alpha).abs() <= 1e-14 * self.alpha.max(other.alpha)
    }
}

/// Normalization convention for the Segal-Bargmann type kernels.
///
/// `BargmannNormalized` carries the prefactor `(α/π)^{1/4}` which makes the
/// transforms unitary. `Unnormalized` drops it; the feature-map constant
/// `γ√(π/2)` only shows up in that form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    BargmannNormalized,
    Unnormalized,
}

impl Convention {
    /// Multiplicative prefactor of the Segal-Bargmann kernels at parameter `alpha`.
    pub fn prefactor(self, alpha: f64) -> f64 {
        match self {
            Convention::BargmannNormalized => (alpha / std::f64::consts::PI).powf(0.25),
            Convention::Unnormalized => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::BargmannNormalized => "bargmann",
            Convention::Unnormalized => "unnormalized",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bargmann" | "bargmann-normalized" => Ok(Convention::BargmannNormalized),
            "unnormalized" | "plain" => Ok(Convention::Unnormalized),
            other => Err(format!("unknown convention `{other}` (expected bargmann|unnormalized)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub width: Width,
    pub convention: Convention,
}

impl KernelParams {
    pub fn new(gamma: f64, convention: Convention) -> Result<Self> {
        Ok(KernelParams {
            width: Width::new(gamma)?,
            convention,
        })
    }
}
