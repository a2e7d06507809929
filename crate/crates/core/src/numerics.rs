//! Gaussian-weight quadrature on the real line and the complex plane, and
//! log-scaled basis coefficients.
//!
//! Every integral in this crate carries a Gaussian factor. [`Quad1D`]
//! approximates `∫ f(t) exp(-s t²) dt`; [`Quad2D`] is the tensor product over
//! `z = x + iy` and approximates `∫ f(z) exp(-s|z|²) dA(z)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{check_positive, Error, Result};

/// Default number of points per real axis.
pub const DEFAULT_QUAD_R: usize = 64;
/// Default number of points per axis of the complex tensor rule.
pub const DEFAULT_QUAD_C: usize = 48;

/// Gauss-Hermite rule for the weight `exp(-s t²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quad1D {
    scale: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    // weights[i] * exp(s * nodes[i]^2)
    flat_weights: Vec<f64>,
}

impl Quad1D {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights with the Gaussian factor divided out, for integrands that
    /// already contain `exp(-s t²)`.
    pub fn flat_weights(&self) -> &[f64] {
        &self.flat_weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Tensor rule for the radial weight `exp(-s|z|²) = exp(-s x²) exp(-s y²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quad2D {
    pub rule_x: Quad1D,
    pub rule_y: Quad1D,
}

impl Quad2D {
    pub fn radial(n: usize, s: f64) -> Result<Self> {
        let rule = gauss_hermite(n, s)?;
        Ok(Quad2D {
            rule_x: rule.clone(),
            rule_y: rule,
        })
    }

    /// Scale of the radial weight. Both axes share it by construction.
    pub fn scale(&self) -> f64 {
        self.rule_x.scale
    }

    /// `(z, w)` pairs of the tensor grid.
    pub fn points(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.rule_x.iter().flat_map(move |(x, wx)| {
            self.rule_y
                .iter()
                .map(move |(y, wy)| (Complex64::new(x, y), wx * wy))
        })
    }

    pub fn len(&self) -> usize {
        self.rule_x.len() * self.rule_y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Orthonormal Hermite polynomials for the weight `exp(-t²)` at `t`,
/// degrees `0..n` inclusive of `n`.
fn orthonormal_hermite(n: usize, t: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    p.push(std::f64::consts::PI.powf(-0.25));
    if n >= 1 {
        p.push(std::f64::consts::SQRT_2 * t * p[0]);
    }
    for k in 1..n {
        let next = (t * p[k] - (k as f64 / 2.0).sqrt() * p[k - 1]) / ((k as f64 + 1.0) / 2.0).sqrt();
        p.push(next);
    }
    p
}

/// `n`-point Gauss-Hermite rule for the weight `exp(-s t²)`.
///
/// Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi
/// matrix, are polished by Newton steps on the orthonormal recurrence and
/// symmetrized; weights are the Christoffel numbers `1/Σ p_k(t)²`. The
/// standard-weight rule is rescaled by `t ↦ t/√s`, `w ↦ w/√s`.
pub fn gauss_hermite(n: usize, s: f64) -> Result<Quad1D> {
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
        });
    }
    let s = check_positive("s", s)?;

    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let p = orthonormal_hermite(n, *t);
            let dp = (2.0 * n as f64).sqrt() * p[n - 1];
            if dp == 0.0 {
                break;
            }
            let step = p[n] / dp;
            *t -= step;
            if step.abs() <= 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
    }

    let mut weights: Vec<f64> = nodes
        .iter()
        .map(|&t| {
            let p = orthonormal_hermite(n - 1, t);
            1.0 / p.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();

    for i in 0..n / 2 {
        let j = n - 1 - i;
        let t = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -t;
        nodes[j] = t;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let root = s.sqrt();
    let nodes: Vec<f64> = nodes.into_iter().map(|t| t / root).collect();
    let weights: Vec<f64> = weights.into_iter().map(|w| w / root).collect();
    let flat_weights = nodes
        .iter()
        .zip(&weights)
        .map(|(&t, &w)| w * (s * t * t).exp())
        .collect();
    Ok(Quad1D {
        scale: s,
        nodes,
        weights,
        flat_weights,
    })
}

/// `Σ wᵢ f(tᵢ) ≈ ∫ f(t) exp(-s t²) dt`.
pub fn integrate_r<F>(f: F, rule: &Quad1D) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, w) in rule.iter() {
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                node: Complex64::new(t, 0.0),
            });
        }
        acc += v * w;
    }
    Ok(acc)
}

/// `Σᵢ Σⱼ wxᵢ wyⱼ f(xᵢ + i yⱼ) ≈ ∫ f(z) exp(-s|z|²) dA(z)`.
pub fn integrate_c<F>(f: F, rule: &Quad2D) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, w) in rule.points() {
        let v = f(z);
        if !v.is_finite() {
            return Err(Error::NonFinite { node: z });
        }
        acc += v * w;
    }
    Ok(acc)
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `log √(2ⁿ / (γ²ⁿ n!))`, the log of the normalization of the `n`-th RBF
/// orthonormal basis function. Equal to `log √(αⁿ/n!)` with `α = 2/γ²`.
pub fn log_basis_coeff(n: usize, gamma: f64) -> Result<f64> {
    let gamma = check_positive("gamma", gamma)?;
    let n_f = n as f64;
    Ok(0.5 * (n_f * std::f64::consts::LN_2 - 2.0 * n_f * gamma.ln() - ln_factorial(n)))
}
