//! α-weighted normalized Hermite functions
//!
//! `ψₙ^α(x) = (α/π)^{1/4} (2ⁿ n!)^{-1/2} Hₙ(√α x) exp(-α x²/2)`,
//! an orthonormal basis of `L²(ℝ)` and the eigenbasis of the α-scaled
//! Fourier transform.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};
use crate::numerics::Quad1D;

/// Default number of retained Hermite / basis coefficients.
pub const DEFAULT_TRUNC: usize = 32;

/// Number of trailing coefficients used for the truncation diagnostic.
pub const TAIL_WINDOW: usize = 4;

pub type Sampler = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Element of `L²(ℝ)` in the basis `ψ₀^α … ψ_{N-1}^α`, optionally backed by
/// the pointwise function it was expanded from.
#[derive(Clone)]
pub struct L2Sig {
    alpha: f64,
    coeffs: Vec<Complex64>,
    sampler: Option<Sampler>,
}

impl fmt::Debug for L2Sig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("L2Sig")
            .field("alpha", &self.alpha)
            .field("coeffs", &self.coeffs)
            .field("sampler", &self.sampler.is_some())
            .finish()
    }
}

impl L2Sig {
    pub fn new(alpha: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        let alpha = check_positive("alpha", alpha)?;
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite { node: *bad });
        }
        Ok(L2Sig {
            alpha,
            coeffs,
            sampler: None,
        })
    }

    /// `ψₙ^α` truncated to `len` coefficients.
    pub fn basis(alpha: f64, n: usize, len: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len.max(n + 1)];
        coeffs[n] = Complex64::new(1.0, 0.0);
        L2Sig::new(alpha, coeffs)
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = Some(sampler);
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn sampler(&self) -> Option<&Sampler> {
        self.sampler.as_ref()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value at `x`: the sampler when present, otherwise the Hermite sum.
    pub fn value(&self, x: f64) -> Complex64 {
        match &self.sampler {
            Some(s) => s(x),
            None => self.synthesize(x),
        }
    }

    /// `Σ cₙ ψₙ^α(x)`, ignoring any sampler.
    pub fn synthesize(&self, x: f64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let psi = hermite_fns(self.coeffs.len() - 1, self.alpha, x);
        self.coeffs.iter().zip(&psi).map(|(c, p)| c * p).sum()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ aₙ conj(bₙ)`.
    pub fn inner(&self, other: &L2Sig) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// ℓ² norm of the last [`TAIL_WINDOW`] coefficients.
    pub fn tail(&self) -> f64 {
        tail_mass(&self.coeffs)
    }

    /// ℓ² distance between coefficient vectors, zero-padding the shorter.
    pub fn distance(&self, other: &L2Sig) -> f64 {
        coeff_distance(&self.coeffs, &other.coeffs)
    }
}

pub(crate) fn tail_mass(coeffs: &[Complex64]) -> f64 {
    let start = coeffs.len().saturating_sub(TAIL_WINDOW);
    coeffs[start..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn coeff_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(zero) - b.get(i).copied().unwrap_or(zero)).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `ψ₀^α(x) … ψ_{n}^α(x)` by the normalized three-term recurrence
/// `ψ_{k+1} = √(2/(k+1)) u ψ_k − √(k/(k+1)) ψ_{k−1}`, `u = √α x`.
pub fn hermite_fns(n: usize, alpha: f64, x: f64) -> Vec<f64> {
    let u = alpha.sqrt() * x;
    let mut psi = Vec::with_capacity(n + 1);
    psi.push((alpha / std::f64::consts::PI).powf(0.25) * (-0.5 * u * u).exp());
    if n >= 1 {
        psi.push(std::f64::consts::SQRT_2 * u * psi[0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * psi[k] - (kf / (kf + 1.0)).sqrt() * psi[k - 1];
        psi.push(next);
    }
    psi
}

pub fn hermite_fn(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let alpha = check_positive("alpha", alpha)?;
    Ok(hermite_fns(n, alpha, x)[n])
}

/// Project a pointwise function onto `ψ₀^α … ψ_{N-1}^α`.
///
/// `rule` must carry the weight `exp(-α x²)`: the product `ψₙ f` of two
/// `exp(-α x²/2)`-decaying functions is integrated against the flat weights.
pub fn hermite_expand<F>(f: F, alpha: f64, n: usize, rule: &Quad1D) -> Result<L2Sig>
where
    F: Fn(f64) -> Complex64 + Send + Sync + 'static,
{
    let alpha = check_positive("alpha", alpha)?;
    if n == 0 {
        return Err(Error::Domain { name: "N", value: 0.0 });
    }
    if (rule.scale() - alpha).abs() > 1e-12 * alpha {
        return Err(Error::Domain {
            name: "rule scale (must equal alpha)",
            value: rule.scale(),
        });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (&x, &w) in rule.nodes().iter().zip(rule.flat_weights()) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                node: Complex64::new(x, 0.0),
            });
        }
        let psi = hermite_fns(n - 1, alpha, x);
        for (c, p) in coeffs.iter_mut().zip(&psi) {
            *c += v * (w * p);
        }
    }
    Ok(L2Sig {
        alpha,
        coeffs,
        sampler: Some(Arc::new(f)),
    })
}

/// Matrix of `φ ↦ xφ` in `ψ₀^α … ψ_{N-1}^α`: symmetric tridiagonal with
/// off-diagonal `√((n+1)/(2α))`.
pub fn position_matrix(n: usize, alpha: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / (2.0 * alpha)).sqrt()
        } else {
            0.0
        }
    })
}

/// `(-i)ⁿ`.
pub fn minus_i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Fourier transform `F_α φ(λ) = √(α/2π) ∫ exp(-iαλx) φ(x) dx` acting on
/// Hermite coefficients: `ψₙ^α` is an eigenfunction with eigenvalue `(-i)ⁿ`.
pub fn fourier_l2(sig: &L2Sig) -> L2Sig {
    let coeffs = sig
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * minus_i_pow(n))
        .collect();
    L2Sig {
        alpha: sig.alpha,
        coeffs,
        sampler: None,
    }
}
