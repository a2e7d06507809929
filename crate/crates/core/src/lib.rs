//! Numerics for the complex Gaussian RBF reproducing-kernel Hilbert space
//! `H_γ`, the Fock space `F_α` with `α = 2/γ²`, and the maps between them.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`numerics`] | Gauss-Hermite rules on ℝ and ℂ, log-scaled coefficients |
//! | [`hermite`] | α-weighted Hermite functions, expansions, position matrix, Fourier transform |
//! | [`kernels`] | Fock, RBF and Segal-Bargmann kernels, Mercer sums, Gram matrices |
//! | [`spaces`] | Functions in `H_γ` / `F_α`, the multiplication isomorphism, norms, reproducing integral |
//! | [`transforms`] | Segal-Bargmann transforms, their inverses, feature map, Fourier conjugation |
//! | [`operators`] | Weyl operators, translations, position and ladder operators |
//!
//! Inner products on `H_γ` and `F_α` are linear in the first argument,
//! `⟨f, g⟩ = Σ fₙ conj(gₙ)`; the reproducing property reads `f(w) = ⟨f, K^w⟩`.
//! The `L²(ℝ)` product on [`hermite::L2Sig`] uses the same convention so that
//! the unitary transforms intertwine the two products without conjugation.

pub mod error;
pub mod hermite;
pub mod kernels;
pub mod numerics;
pub mod operators;
pub mod params;
pub mod spaces;
pub mod transforms;

pub use error::{Error, Result};
pub use hermite::L2Sig;
pub use numerics::{Quad1D, Quad2D};
pub use params::{Convention, KernelParams, Width};
pub use spaces::{Basis, HoloFun};
pub use transforms::TransformContext;

pub use num_complex::Complex64;

/// Result of an operation whose output was truncated to a finite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Projected<T> {
    pub value: T,
    /// ℓ² mass estimated to lie outside the retained basis.
    pub tail: f64,
    pub warnings: Vec<Warning>,
}

impl<T> Projected<T> {
    pub fn exact(value: T) -> Self {
        Projected {
            value,
            tail: 0.0,
            warnings: Vec::new(),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Projected<U> {
        Projected {
            value: f(self.value),
            tail: self.tail,
            warnings: self.warnings,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Projection discarded more mass than the warning threshold.
    Truncation { tail: f64 },
    /// The kernel convention leaves the result off by a constant factor.
    ConventionOffset { factor: f64 },
}

/// Tail mass above which projected results carry a [`Warning::Truncation`].
pub const TRUNCATION_WARN: f64 = 1e-4;
