//! Weyl operators on `F_α` and `H_γ`, translations, and the position and
//! ladder operators in the orthonormal basis.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{hermite_expand, tail_mass};
use crate::kernels::normalized_fock_state;
use crate::numerics::log_basis_coeff;
use crate::params::Width;
use crate::spaces::{fock_projection, to_fock, to_rbf, Basis, HoloFun};
use crate::transforms::{RbfRoute, Route, TransformContext};
use crate::{Projected, Warning, TRUNCATION_WARN};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeylRoute {
    /// `exp((a²−|a|²)/γ² + 2z(ā−a)/γ²) f(z−a)`.
    Explicit,
    /// Multiply by `exp(z²/γ²)`, apply the Fock Weyl operator, divide back.
    Diagram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

fn require(f: &HoloFun, ctx: &TransformContext, basis: Basis, expected: &'static str) -> Result<()> {
    if !f.width().same_space(&ctx.width()) {
        return Err(Error::WidthMismatch {
            left: ctx.width().gamma(),
            right: f.width().gamma(),
        });
    }
    if f.basis() != basis {
        return Err(Error::Basis {
            expected,
            found: f.basis(),
        });
    }
    Ok(())
}

/// Project a Fock-side function whose norm is known to equal `norm`; the
/// missing mass is the tail.
fn project_unitary<G>(g: G, norm: f64, basis: Basis, ctx: &TransformContext) -> Result<Projected<HoloFun>>
where
    G: Fn(Complex64) -> Complex64,
{
    let coeffs = fock_projection(g, ctx.width(), ctx.trunc(), ctx.rule_c())?;
    let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let tail = (norm * norm - kept).max(0.0).sqrt().max(tail_mass(&coeffs));
    let mut warnings = Vec::new();
    if tail > TRUNCATION_WARN {
        warnings.push(Warning::Truncation { tail });
    }
    Ok(Projected {
        value: HoloFun::new(ctx.width(), basis, coeffs)?,
        tail,
        warnings,
    })
}

/// `W_a^α g(z) = g(z−a) exp(α(z ā − |a|²/2))`.
pub fn weyl_fock_at(g: &HoloFun, a: Complex64, z: Complex64) -> Complex64 {
    g.eval(z - a) * normalized_fock_state(g.width().alpha(), a, z)
}

/// Fock Weyl operator, projected back onto `u₀ … u_{N−1}`.
pub fn weyl_fock(ctx: &TransformContext, a: Complex64, g: &HoloFun) -> Result<Projected<HoloFun>> {
    require(g, ctx, Basis::FockOnb, "fock-onb")?;
    if !a.is_finite() {
        return Err(Error::NonFinite { node: a });
    }
    project_unitary(|z| weyl_fock_at(g, a, z), g.onb_norm()?, Basis::FockOnb, ctx)
}

/// RBF-Weyl operator applied to a pointwise function, explicit form.
pub fn weyl_rbf_fn<F>(width: Width, a: Complex64, f: F) -> impl Fn(Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let g2 = width.gamma_sq();
    let c0 = (a * a - a.norm_sqr()) / g2;
    let c1 = (a.conj() - a) * (2.0 / g2);
    move |z| (c0 + c1 * z).exp() * f(z - a)
}

/// `W^{γ,a} f(z)` by either route.
pub fn weyl_rbf_at(f: &HoloFun, a: Complex64, z: Complex64, route: WeylRoute) -> Complex64 {
    let g2 = f.width().gamma_sq();
    match route {
        WeylRoute::Explicit => weyl_rbf_fn(f.width(), a, |p| f.eval(p))(z),
        WeylRoute::Diagram => {
            let mf = f.eval_fock_side(z - a) * normalized_fock_state(f.width().alpha(), a, z);
            (-(z * z) / g2).exp() * mf
        }
    }
}

/// RBF-Weyl operator, projected back onto `e₀ … e_{N−1}`.
pub fn weyl_rbf(ctx: &TransformContext, a: Complex64, f: &HoloFun, route: WeylRoute) -> Result<Projected<HoloFun>> {
    require(f, ctx, Basis::RbfOnb, "rbf-onb")?;
    if !a.is_finite() {
        return Err(Error::NonFinite { node: a });
    }
    match route {
        WeylRoute::Explicit => {
            let g2 = ctx.width().gamma_sq();
            let norm = f.onb_norm()?;
            project_unitary(
                |z| (z * z / g2).exp() * weyl_rbf_at(f, a, z, WeylRoute::Explicit),
                norm,
                Basis::RbfOnb,
                ctx,
            )
        }
        WeylRoute::Diagram => {
            let p = weyl_fock(ctx, a, &to_fock(f)?)?;
            let v = to_rbf(&p.value)?;
            Ok(Projected { value: v, ..p })
        }
    }
}

/// Phase in `W^{γ,a} W^{γ,b} = exp(-(2i/γ²) Im(a b̄)) W^{γ,a+b}`.
pub fn weyl_semigroup_phase(gamma: f64, a: Complex64, b: Complex64) -> Result<Complex64> {
    let width = Width::new(gamma)?;
    let theta = -(2.0 / width.gamma_sq()) * (a * b.conj()).im;
    Ok(Complex64::from_polar(1.0, theta))
}

/// `L_γ^a = 𝔅 ∘ τ_a ∘ 𝔅⁻¹` for real `a`, `τ_a φ(x) = φ(x − a)`.
///
/// With the kernel `exp(-(x − √2 z)²/γ²)` a shift by `a` in `x` is a shift by
/// `a/√2` in `z`, so this is the RBF-Weyl operator at `a/√2`:
/// `L_γ^a f(z) = f(z − a/√2)`.
pub fn translation_rbf(ctx: &TransformContext, a: Complex64, f: &HoloFun) -> Result<Projected<HoloFun>> {
    let shift = real_shift(a)?;
    weyl_rbf(ctx, Complex64::new(shift / SQRT_2, 0.0), f, WeylRoute::Explicit)
}

/// [`translation_rbf`] by conjugation: invert the transform, shift the
/// sampled signal, re-expand in Hermite functions and transform back.
pub fn translation_conjugated(ctx: &TransformContext, a: Complex64, f: &HoloFun) -> Result<Projected<HoloFun>> {
    let shift = real_shift(a)?;
    require(f, ctx, Basis::RbfOnb, "rbf-onb")?;
    let sig = ctx.rbf_bargmann_inverse(f, Route::Coefficient)?.value;
    let alpha = ctx.width().alpha();
    let sig = Arc::new(sig);
    let shifted = hermite_expand(move |x| sig.synthesize(x - shift), alpha, ctx.trunc(), ctx.rule_r())?;
    let tail = shifted.tail();
    let mut p = ctx.rbf_bargmann(&shifted, RbfRoute::Coefficient)?;
    p.tail = tail;
    if tail > TRUNCATION_WARN {
        p.warnings.push(Warning::Truncation { tail });
    }
    Ok(p)
}

fn real_shift(a: Complex64) -> Result<f64> {
    if a.im != 0.0 || !a.re.is_finite() {
        return Err(Error::Domain {
            name: "translation (must be real; use weyl_rbf)",
            value: if a.im != 0.0 { a.im } else { a.re },
        });
    }
    Ok(a.re)
}

/// `d/dz` on the Fock side in `u₀ … u_{N−1}`: `uₙ ↦ n (cₙ/cₙ₋₁) uₙ₋₁`.
pub fn derivative_matrix(width: Width, n: usize) -> DMatrix<f64> {
    let lc = |k: usize| log_basis_coeff(k, width.gamma()).expect("validated width");
    DMatrix::from_fn(n, n, |i, j| if j == i + 1 { j as f64 * (lc(j) - lc(i)).exp() } else { 0.0 })
}

/// `M_z` in `u₀ … u_{N−1}`: `uₙ ↦ (cₙ/cₙ₊₁) uₙ₊₁`, truncated.
pub fn multiplication_matrix(width: Width, n: usize) -> DMatrix<f64> {
    let lc = |k: usize| log_basis_coeff(k, width.gamma()).expect("validated width");
    DMatrix::from_fn(n, n, |i, j| if i == j + 1 { (lc(j) - lc(i)).exp() } else { 0.0 })
}

/// `d/dz` on `H_γ` in `e₀ … e_{N−1}`: the Fock derivative plus the chain
/// term `-(2z/γ²)` from `exp(-z²/γ²)`.
pub fn rbf_derivative_matrix(width: Width, n: usize) -> DMatrix<f64> {
    derivative_matrix(width, n) - multiplication_matrix(width, n) * (2.0 / width.gamma_sq())
}

/// `A = (γ²/(2√2)) d/dz + √2 M_z` on `H_γ` in `e₀ … e_{N−1}`.
///
/// Transported to `L²(ℝ)` this is multiplication by `x`, so the result
/// equals the Hermite position matrix at `α = 2/γ²` away from the last row
/// and column.
pub fn position_rbf_matrix(gamma: f64, n: usize) -> Result<DMatrix<f64>> {
    let width = Width::new(gamma)?;
    if n < 2 {
        return Err(Error::Domain {
            name: "N (at least 2)",
            value: n as f64,
        });
    }
    let d = rbf_derivative_matrix(width, n);
    let z = multiplication_matrix(width, n);
    Ok(d * (width.gamma_sq() / (2.0 * SQRT_2)) + z * SQRT_2)
}

/// Largest entry of `D + (4/γ²) Z − (2√2/γ²) X` with `D`, `Z` the RBF
/// derivative and multiplication matrices and `X` the Hermite position
/// matrix, ignoring the last row and column.
pub fn position_identity_residual(gamma: f64, n: usize) -> Result<f64> {
    let width = Width::new(gamma)?;
    let g2 = width.gamma_sq();
    let x = crate::hermite::position_matrix(n, width.alpha());
    let r = rbf_derivative_matrix(width, n) + multiplication_matrix(width, n) * (4.0 / g2) - x * (2.0 * SQRT_2 / g2);
    let m = n.saturating_sub(1);
    Ok(r.view((0, 0), (m, m)).amax())
}

/// Lowering `eₙ ↦ √n eₙ₋₁` or raising `eₙ ↦ √(n+1) eₙ₊₁`, keeping the
/// input length. Raising drops the top coefficient and reports it as tail.
pub fn ladder(f: &HoloFun, direction: Ladder) -> Result<Projected<HoloFun>> {
    if f.basis() != Basis::RbfOnb {
        return Err(Error::Basis {
            expected: "rbf-onb",
            found: f.basis(),
        });
    }
    let c = f.coeffs();
    let n = c.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; n];
    let mut tail = 0.0;
    match direction {
        Ladder::Lower => {
            for k in 1..n {
                out[k - 1] = c[k] * (k as f64).sqrt();
            }
        }
        Ladder::Raise => {
            for k in 0..n {
                let v = c[k] * ((k + 1) as f64).sqrt();
                if k + 1 < n {
                    out[k + 1] = v;
                } else {
                    tail = v.norm();
                }
            }
        }
    }
    let mut warnings = Vec::new();
    if tail > TRUNCATION_WARN {
        warnings.push(Warning::Truncation { tail });
    }
    Ok(Projected {
        value: HoloFun::new(f.width(), Basis::RbfOnb, out)?,
        tail,
        warnings,
    })
}
