//! Elements of the RBF space `H_γ` and the Fock space `F_α`, `α = 2/γ²`.
//!
//! A [`HoloFun`] is a finite coefficient vector in one of three bases:
//!
//! * `Taylor`: monomials `zⁿ`
//! * `FockOnb`: `uₙ(z) = √(αⁿ/n!) zⁿ`, orthonormal in `F_α`
//! * `RbfOnb`: `eₙ(z) = √(αⁿ/n!) zⁿ exp(-z²/γ²)`, orthonormal in `H_γ`
//!
//! Multiplication by `exp(z²/γ²)` maps `eₙ` to `uₙ`, so the isometry
//! `H_γ → F_α` is the identity on orthonormal coefficients. Quadrature always
//! runs on the Fock side where the weight is exactly `exp(-α|z|²)`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{coeff_distance, tail_mass};
use crate::kernels::fock_kernel;
use crate::numerics::{ln_factorial, log_basis_coeff, Quad2D};
use crate::params::Width;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Taylor,
    FockOnb,
    RbfOnb,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Taylor => "taylor",
            Basis::FockOnb => "fock-onb",
            Basis::RbfOnb => "rbf-onb",
        })
    }
}

/// Entire function held as a finite coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloFun {
    width: Width,
    basis: Basis,
    coeffs: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl HoloFun {
    pub fn new(width: Width, basis: Basis, coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite { node: *bad });
        }
        Ok(HoloFun { width, basis, coeffs })
    }

    /// `eₙ^γ` (or `uₙ`, or `zⁿ`) padded to `len` coefficients.
    pub fn unit(width: Width, basis: Basis, n: usize, len: usize) -> Self {
        let mut coeffs = vec![ZERO; len.max(n + 1)];
        coeffs[n] = ONE;
        HoloFun { width, basis, coeffs }
    }

    pub fn zero(width: Width, basis: Basis, len: usize) -> Self {
        HoloFun {
            width,
            basis,
            coeffs: vec![ZERO; len],
        }
    }

    pub fn width(&self) -> Width {
        self.width
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn with_coeffs(&self, basis: Basis, coeffs: Vec<Complex64>) -> HoloFun {
        HoloFun {
            width: self.width,
            basis,
            coeffs,
        }
    }

    /// ℓ² norm of orthonormal coefficients: the norm in `H_γ` for `RbfOnb`
    /// and in `F_α` for `FockOnb`.
    pub fn onb_norm(&self) -> Result<f64> {
        match self.basis {
            Basis::Taylor => Err(Error::Basis {
                expected: "orthonormal",
                found: Basis::Taylor,
            }),
            _ => Ok(self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()),
        }
    }

    /// Norm in `H_γ` for `RbfOnb` and `Taylor` inputs.
    pub fn rbf_norm(&self) -> Result<f64> {
        match self.basis {
            Basis::RbfOnb => self.onb_norm(),
            Basis::Taylor => to_fock(self)?.onb_norm(),
            Basis::FockOnb => Err(Error::Basis {
                expected: "rbf-onb or taylor",
                found: Basis::FockOnb,
            }),
        }
    }

    /// ℓ² norm of the last few coefficients.
    pub fn tail(&self) -> f64 {
        tail_mass(&self.coeffs)
    }

    /// ℓ² distance between coefficient vectors in the same basis.
    pub fn distance(&self, other: &HoloFun) -> Result<f64> {
        if self.basis != other.basis {
            return Err(Error::Basis {
                expected: basis_name(self.basis),
                found: other.basis,
            });
        }
        Ok(coeff_distance(&self.coeffs, &other.coeffs))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        eval(self, z)
    }

    /// `exp(z²/γ²) f(z)` for an `H_γ` element, `f(z)` for a Fock element:
    /// the function seen on the Fock side.
    pub fn eval_fock_side(&self, z: Complex64) -> Complex64 {
        match self.basis {
            Basis::RbfOnb | Basis::FockOnb => onb_poly(self.width.alpha(), &self.coeffs, z),
            Basis::Taylor => (z * z / self.width.gamma_sq()).exp() * horner(&self.coeffs, z),
        }
    }
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Taylor => "taylor",
        Basis::FockOnb => "fock-onb",
        Basis::RbfOnb => "rbf-onb",
    }
}

/// `uₖ(z) = √(αᵏ/k!) zᵏ` for `k < n`, by `uₖ = uₖ₋₁ · z √(α/k)`.
pub fn fock_basis_values(alpha: f64, n: usize, z: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    let mut t = ONE;
    for k in 0..n {
        if k > 0 {
            t *= z * (alpha / k as f64).sqrt();
        }
        out.push(t);
    }
    out
}

fn onb_poly(alpha: f64, coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut t = ONE;
    let mut acc = ZERO;
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            t *= z * (alpha / k as f64).sqrt();
        }
        acc += c * t;
    }
    acc
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

pub fn eval(f: &HoloFun, z: Complex64) -> Complex64 {
    let alpha = f.width.alpha();
    match f.basis {
        Basis::Taylor => horner(&f.coeffs, z),
        Basis::FockOnb => onb_poly(alpha, &f.coeffs, z),
        Basis::RbfOnb => onb_poly(alpha, &f.coeffs, z) * (-(z * z) / f.width.gamma_sq()).exp(),
    }
}

/// Coefficients of `exp(sign · z²/γ²) · Σ aₙ zⁿ` through degree `len − 1`,
/// each divided by `scale(k)` given in log form.
fn gaussian_cauchy(a: &[Complex64], gamma: f64, sign: f64, len: usize, log_scale: impl Fn(usize) -> f64) -> Vec<Complex64> {
    let ln_g = gamma.ln();
    (0..len)
        .map(|k| {
            let ls = log_scale(k);
            let mut acc = ZERO;
            for j in 0..=k / 2 {
                let Some(&ak) = a.get(k - 2 * j) else { continue };
                if ak == ZERO {
                    continue;
                }
                let sgn = if sign < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
                let mag = (-2.0 * j as f64 * ln_g - ln_factorial(j) - ls).exp();
                acc += ak * (sgn * mag);
            }
            acc
        })
        .collect()
}

/// The isometry `H_γ → F_α`, `f ↦ exp(z²/γ²) f`.
///
/// On `RbfOnb` input the coefficient vector is unchanged; on `Taylor` input
/// the Cauchy product with the series of `exp(z²/γ²)` is taken through the
/// input length.
pub fn to_fock(f: &HoloFun) -> Result<HoloFun> {
    match f.basis {
        Basis::RbfOnb => Ok(f.with_coeffs(Basis::FockOnb, f.coeffs.clone())),
        Basis::Taylor => {
            let gamma = f.width.gamma();
            let coeffs = gaussian_cauchy(&f.coeffs, gamma, 1.0, f.coeffs.len(), |k| {
                log_basis_coeff(k, gamma).expect("validated width")
            });
            Ok(f.with_coeffs(Basis::FockOnb, coeffs))
        }
        Basis::FockOnb => Err(Error::Basis {
            expected: "rbf-onb or taylor",
            found: Basis::FockOnb,
        }),
    }
}

/// Inverse (and adjoint) of [`to_fock`], `g ↦ exp(-z²/γ²) g`.
pub fn to_rbf(g: &HoloFun) -> Result<HoloFun> {
    match g.basis {
        Basis::FockOnb => Ok(g.with_coeffs(Basis::RbfOnb, g.coeffs.clone())),
        Basis::Taylor => {
            let gamma = g.width.gamma();
            let coeffs = g
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a * (-log_basis_coeff(k, gamma).expect("validated width")).exp())
                .collect();
            Ok(g.with_coeffs(Basis::RbfOnb, coeffs))
        }
        Basis::RbfOnb => Err(Error::Basis {
            expected: "fock-onb or taylor",
            found: Basis::RbfOnb,
        }),
    }
}

/// Taylor coefficients through degree `len − 1`.
pub fn to_taylor(f: &HoloFun, len: usize) -> HoloFun {
    let alpha = f.width.alpha();
    let gamma = f.width.gamma();
    let scaled: Vec<Complex64> = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, d)| d * (0.5 * (k as f64 * alpha.ln() - ln_factorial(k))).exp())
        .collect();
    let coeffs = match f.basis {
        Basis::Taylor => {
            let mut c = f.coeffs.clone();
            c.resize(len, ZERO);
            c
        }
        Basis::FockOnb => {
            let mut c = scaled;
            c.resize(len, ZERO);
            c
        }
        Basis::RbfOnb => gaussian_cauchy(&scaled, gamma, -1.0, len, |_| 0.0),
    };
    f.with_coeffs(Basis::Taylor, coeffs)
}

/// Result of the sequential norm criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequentialNorm {
    /// Square root of the partial sum through `k = Kmax`.
    pub norm: f64,
    /// Square root of the sum of the last five terms.
    pub tail: f64,
    /// Whether the tail is small enough to call the input a member of `H_γ`
    /// at this truncation.
    pub converged: bool,
}

/// Relative tail level below which [`norm_sequential`] reports convergence.
pub const SEQUENTIAL_TAIL_TOL: f64 = 1e-8;

/// Norm of `f = Σ aₙ zⁿ` in `H_γ` from its Taylor coefficients alone:
/// `‖f‖² = Σₖ (k! γ²ᵏ / 2ᵏ) |bₖ|²` with `bₖ = Σ_{j ≤ ⌊k/2⌋} a_{k−2j} / (γ²ʲ j!)`.
///
/// Each summand of `bₖ` carries the weight `√(k! γ²ᵏ / 2ᵏ)` before it is
/// added, all in log form. Coefficients past the end of `a` are zero.
pub fn norm_sequential(a: &[Complex64], gamma: f64, kmax: usize) -> Result<SequentialNorm> {
    let width = Width::new(gamma)?;
    let ln_g = width.gamma().ln();
    let ln2 = std::f64::consts::LN_2;
    let mut terms = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let kf = k as f64;
        let ln_weight = 0.5 * (ln_factorial(k) + 2.0 * kf * ln_g - kf * ln2);
        let mut b = ZERO;
        for j in 0..=k / 2 {
            let Some(&ak) = a.get(k - 2 * j) else { continue };
            if ak == ZERO {
                continue;
            }
            b += ak * (ln_weight - 2.0 * j as f64 * ln_g - ln_factorial(j)).exp();
        }
        terms.push(b.norm_sqr());
    }
    let total: f64 = terms.iter().sum();
    let tail: f64 = terms.iter().rev().take(5).sum();
    let norm = total.sqrt();
    let tail = tail.sqrt();
    Ok(SequentialNorm {
        norm,
        tail,
        converged: tail.is_finite() && tail <= SEQUENTIAL_TAIL_TOL * norm.max(1.0),
    })
}

#[derive(Debug, Clone, Copy)]
pub enum InnerRoute<'a> {
    /// ℓ² product of orthonormal coefficients.
    Coefficient,
    /// Weighted area integral, evaluated on the Fock side.
    Quadrature(&'a Quad2D),
}

/// The space a function is read in: `H_γ` for `RbfOnb`/`Taylor`, `F_α` for
/// `FockOnb`.
fn in_fock_space(f: &HoloFun) -> bool {
    f.basis == Basis::FockOnb
}

pub(crate) fn check_rule(width: Width, rule: &Quad2D) -> Result<()> {
    let alpha = width.alpha();
    if (rule.scale() - alpha).abs() > 1e-12 * alpha {
        return Err(Error::Domain {
            name: "quadrature scale (must equal alpha)",
            value: rule.scale(),
        });
    }
    Ok(())
}

/// Inner product `⟨f, g⟩`, linear in `f`.
///
/// Both arguments must live in the same space. The quadrature route computes
/// `(2/(πγ²)) ∫ f conj(g) exp((z−z̄)²/γ²) dA` for `H_γ` and
/// `(α/π) ∫ f conj(g) exp(-α|z|²) dA` for `F_α`, splitting off the Gaussian
/// `exp(-α|z|²)` so the tensor rule applies.
pub fn inner(f: &HoloFun, g: &HoloFun, route: InnerRoute<'_>) -> Result<Complex64> {
    if !f.width.same_space(&g.width) {
        return Err(Error::WidthMismatch {
            left: f.width.gamma(),
            right: g.width.gamma(),
        });
    }
    if in_fock_space(f) != in_fock_space(g) {
        return Err(Error::Basis {
            expected: basis_name(f.basis),
            found: g.basis,
        });
    }
    let alpha = f.width.alpha();
    match route {
        InnerRoute::Coefficient => {
            let fo = if f.basis == Basis::Taylor { to_fock(f)? } else { f.clone() };
            let go = if g.basis == Basis::Taylor { to_fock(g)? } else { g.clone() };
            Ok(fo.coeffs.iter().zip(&go.coeffs).map(|(a, b)| a * b.conj()).sum())
        }
        InnerRoute::Quadrature(rule) => {
            check_rule(f.width, rule)?;
            let g2 = f.width.gamma_sq();
            let fock = in_fock_space(f);
            let mut acc = ZERO;
            for (z, w) in rule.points() {
                let mut v = f.eval(z) * g.eval(z).conj();
                if !fock {
                    // exp((z−z̄)²/γ²) = exp(2 Re(z²)/γ²) exp(-α|z|²)
                    v *= (2.0 * (z * z).re / g2).exp();
                }
                if !v.is_finite() {
                    return Err(Error::NonFinite { node: z });
                }
                acc += v * w;
            }
            Ok(acc * (alpha / std::f64::consts::PI))
        }
    }
}

/// The reproducing integral
/// `f(w) = (2/(πγ²)) ∫ f(z) conj(K_γ(z,w)) exp((z−z̄)²/γ²) dA(z)`,
/// evaluated as `exp(-w²/γ²) (α/π) ∫ (Mf)(z) conj(F_α(z,w)) exp(-α|z|²) dA`.
pub fn reproduce(f: &HoloFun, w: Complex64, rule: &Quad2D) -> Result<Complex64> {
    if in_fock_space(f) {
        return Err(Error::Basis {
            expected: "rbf-onb or taylor",
            found: f.basis,
        });
    }
    check_rule(f.width, rule)?;
    let alpha = f.width.alpha();
    let mut acc = ZERO;
    for (z, wt) in rule.points() {
        let v = f.eval_fock_side(z) * fock_kernel(alpha, z, w).conj();
        if !v.is_finite() {
            return Err(Error::NonFinite { node: z });
        }
        acc += v * wt;
    }
    Ok(acc * (alpha / std::f64::consts::PI) * (-(w * w) / f.width.gamma_sq()).exp())
}

/// RBF coherent state `K_γ^w = K_γ(·, w)` in `RbfOnb`: coefficients
/// `eₙ^γ(w̄)`.
pub fn coherent_coeffs(width: Width, w: Complex64, n: usize) -> Result<HoloFun> {
    if n == 0 {
        return Err(Error::Domain { name: "N", value: 0.0 });
    }
    let wc = w.conj();
    let env = (-(wc * wc) / width.gamma_sq()).exp();
    let coeffs = fock_basis_values(width.alpha(), n, wc)
        .into_iter()
        .map(|u| u * env)
        .collect();
    Ok(HoloFun {
        width,
        basis: Basis::RbfOnb,
        coeffs,
    })
}

/// `(|f(z)|, exp(2y²/γ²) ‖f‖)` for `z = x + iy`; the first never exceeds
/// the second.
pub fn bound_check(f: &HoloFun, z: Complex64) -> Result<(f64, f64)> {
    let norm = f.rbf_norm()?;
    let lhs = f.eval(z).norm();
    let rhs = (2.0 * z.im * z.im / f.width.gamma_sq()).exp() * norm;
    Ok((lhs, rhs))
}

/// Coefficients of a Fock-side function on `u₀ … u_{n−1}`:
/// `cₖ = (α/π) ∫ g(z) conj(uₖ(z)) exp(-α|z|²) dA`.
pub fn fock_projection<G>(g: G, width: Width, n: usize, rule: &Quad2D) -> Result<Vec<Complex64>>
where
    G: Fn(Complex64) -> Complex64,
{
    check_rule(width, rule)?;
    let alpha = width.alpha();
    let mut coeffs = vec![ZERO; n];
    for (z, w) in rule.points() {
        let v = g(z);
        if !v.is_finite() {
            return Err(Error::NonFinite { node: z });
        }
        let vw = v * w;
        for (c, u) in coeffs.iter_mut().zip(fock_basis_values(alpha, n, z)) {
            *c += vw * u.conj();
        }
    }
    let scale = alpha / std::f64::consts::PI;
    Ok(coeffs.into_iter().map(|c| c * scale).collect())
}

/// `√((α/π) ∫ |g|² exp(-α|z|²) dA)` for a Fock-side function.
pub fn fock_quadrature_norm<G>(g: G, width: Width, rule: &Quad2D) -> Result<f64>
where
    G: Fn(Complex64) -> Complex64,
{
    check_rule(width, rule)?;
    let mut acc = 0.0;
    for (z, w) in rule.points() {
        let v = g(z);
        if !v.is_finite() {
            return Err(Error::NonFinite { node: z });
        }
        acc += v.norm_sqr() * w;
    }
    Ok((acc * width.alpha() / std::f64::consts::PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::rbf_kernel;
    use crate::numerics::DEFAULT_QUAD_C;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w(g: f64) -> Width {
        Width::new(g).unwrap()
    }

    fn rule(width: Width) -> Quad2D {
        Quad2D::radial(DEFAULT_QUAD_C, width.alpha()).unwrap()
    }

    fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    /// Taylor coefficients of exp(-z²/γ²) · Σ pⱼ zʲ through degree len − 1.
    fn taylor_times_gaussian(p: &[Complex64], gamma: f64, len: usize) -> Vec<Complex64> {
        let mut g = vec![ZERO; len];
        let mut m = 0;
        let mut coef = 1.0;
        while 2 * m < len {
            g[2 * m] = c(coef, 0.0);
            m += 1;
            coef *= -1.0 / (gamma * gamma * m as f64);
        }
        (0..len)
            .map(|k| (0..=k).filter(|&j| j < p.len()).map(|j| p[j] * g[k - j]).sum())
            .collect()
    }

    #[test]
    fn eval_examples() {
        let e0 = HoloFun::unit(w(1.0), Basis::RbfOnb, 0, 1);
        assert_relative_eq!(e0.eval(c(0.0, 1.0)).re, 1f64.exp(), max_relative = 1e-15);
        let e1 = HoloFun::unit(w(1.0), Basis::RbfOnb, 1, 2);
        assert_relative_eq!(e1.eval(c(1.0, 0.0)).re, 2f64.sqrt() * (-1f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(e1.eval(c(1.0, 0.0)).re, 0.520_260_095_022_888, max_relative = 1e-14);
        let u2 = HoloFun::unit(Width::from_alpha(2.0).unwrap(), Basis::FockOnb, 2, 3);
        assert_relative_eq!(u2.eval(c(1.0, 0.0)).re, 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn to_fock_examples() {
        let e0 = HoloFun::unit(w(1.0), Basis::RbfOnb, 0, 1);
        let g = to_fock(&e0).unwrap();
        assert_eq!(g.basis(), Basis::FockOnb);
        assert_eq!(g.coeffs(), &[ONE]);

        // exp(z²)·exp(−z²) = 1, so the Taylor series of exp(−z²) maps to u₀.
        let a = taylor_times_gaussian(&[ONE], 1.0, 20);
        let f = HoloFun::new(w(1.0), Basis::Taylor, a).unwrap();
        let g = to_fock(&f).unwrap();
        assert!((g.coeffs()[0] - ONE).norm() < 1e-10);
        for v in &g.coeffs()[1..] {
            assert!(v.norm() < 1e-10);
        }

        assert!(matches!(to_fock(&g), Err(Error::Basis { .. })));
    }

    #[test]
    fn to_rbf_examples() {
        let u3 = HoloFun::unit(w(0.8), Basis::FockOnb, 3, 6);
        assert_eq!(to_rbf(&u3).unwrap(), HoloFun::unit(w(0.8), Basis::RbfOnb, 3, 6));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let f = HoloFun::new(w(1.3), Basis::RbfOnb, random_coeffs(&mut rng, 16)).unwrap();
            let back = to_rbf(&to_fock(&f).unwrap()).unwrap();
            assert_eq!(back, f);
            assert_eq!(to_fock(&f).unwrap().onb_norm().unwrap(), f.onb_norm().unwrap());
        }
        assert!(to_rbf(&HoloFun::unit(w(1.0), Basis::RbfOnb, 0, 1)).is_err());
    }

    #[test]
    fn adjoint_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let f = HoloFun::new(w(1.0), Basis::RbfOnb, random_coeffs(&mut rng, 12)).unwrap();
            let g = HoloFun::new(w(1.0), Basis::FockOnb, random_coeffs(&mut rng, 12)).unwrap();
            let lhs = inner(&to_fock(&f).unwrap(), &g, InnerRoute::Coefficient).unwrap();
            let rhs = inner(&f, &to_rbf(&g).unwrap(), InnerRoute::Coefficient).unwrap();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn taylor_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for g in [0.5, 1.0, 2.0] {
            let mut coeffs = random_coeffs(&mut rng, 8);
            coeffs.resize(16, ZERO);
            let f = HoloFun::new(w(g), Basis::RbfOnb, coeffs).unwrap();
            let t = to_taylor(&f, 16);
            let back = to_rbf(&to_fock(&t).unwrap()).unwrap();
            let d = back.distance(&f).unwrap();
            assert!(d < 1e-10, "g={g} d={d}");
            let long = to_taylor(&f, 80);
            for z in [c(0.3, -0.2), c(-1.1, 0.4)] {
                assert!((long.eval(z) - f.eval(z)).norm() < 1e-8);
            }
            let fock = to_fock(&f).unwrap();
            let ft = to_taylor(&fock, 16);
            assert!(to_rbf(&ft).unwrap().distance(&f).unwrap() < 1e-10);
        }
    }

    #[test]
    fn inner_coefficient_orthonormality() {
        for m in 0..6 {
            for n in 0..6 {
                let em = HoloFun::unit(w(1.0), Basis::RbfOnb, m, 6);
                let en = HoloFun::unit(w(1.0), Basis::RbfOnb, n, 6);
                let v = inner(&em, &en, InnerRoute::Coefficient).unwrap();
                assert_eq!(v, if m == n { ONE } else { ZERO });
            }
        }
    }

    #[test]
    fn inner_quadrature_route() {
        let width = w(1.0);
        let r = rule(width);
        let e1 = HoloFun::unit(width, Basis::RbfOnb, 1, 2);
        let v = inner(&e1, &e1, InnerRoute::Quadrature(&r)).unwrap();
        assert!((v - ONE).norm() < 1e-8);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in [0.5, 1.0, 2.0] {
            let width = w(g);
            let r = rule(width);
            for _ in 0..5 {
                let f = HoloFun::new(width, Basis::RbfOnb, random_coeffs(&mut rng, 8)).unwrap();
                let a = inner(&f, &f, InnerRoute::Coefficient).unwrap();
                let b = inner(&f, &f, InnerRoute::Quadrature(&r)).unwrap();
                assert!((a - b).norm() / a.norm() < 1e-7);
                let fg = to_fock(&f).unwrap();
                let bf = inner(&fg, &fg, InnerRoute::Quadrature(&r)).unwrap();
                assert!((a - bf).norm() / a.norm() < 1e-7);
            }
        }
    }

    #[test]
    fn inner_rejects_mismatch() {
        let a = HoloFun::unit(w(1.0), Basis::RbfOnb, 0, 2);
        let b = HoloFun::unit(w(2.0), Basis::RbfOnb, 0, 2);
        assert!(matches!(inner(&a, &b, InnerRoute::Coefficient), Err(Error::WidthMismatch { .. })));
        let f = HoloFun::unit(w(1.0), Basis::FockOnb, 0, 2);
        assert!(matches!(inner(&a, &f, InnerRoute::Coefficient), Err(Error::Basis { .. })));
        let wrong = Quad2D::radial(8, 1.0).unwrap();
        assert!(inner(&a, &a, InnerRoute::Quadrature(&wrong)).is_err());
    }

    #[test]
    fn sequential_norm_of_ground_state() {
        // a = Taylor series of exp(−z²): bₖ = δₖ₀.
        let a = taylor_times_gaussian(&[ONE], 1.0, 41);
        let s = norm_sequential(&a, 1.0, 40).unwrap();
        assert!((s.norm - 1.0).abs() < 1e-10, "{}", s.norm);
        assert!(s.converged);
        assert_eq!(norm_sequential(&[], 1.0, 10).unwrap().norm, 0.0);
    }

    #[test]
    fn sequential_b_coefficients_cancel_exactly() {
        // Exact rational check that Σⱼ a_{k−2j}/(γ²ʲ j!) vanishes for k ≥ 1
        // when a is the series of exp(−z²/γ²), γ² = 2 here.
        let g2 = BigRational::from_integer(BigInt::from(2));
        let fact = |n: usize| -> BigRational {
            BigRational::from_integer((1..=n as i64).map(BigInt::from).product::<BigInt>().max(BigInt::one()))
        };
        let pow = |n: usize| -> BigRational { (0..n).fold(BigRational::one(), |acc, _| acc * g2.clone()) };
        let a = |n: usize| -> BigRational {
            if n % 2 == 1 {
                return BigRational::zero();
            }
            let m = n / 2;
            let sign = if m.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
            sign / (pow(m) * fact(m))
        };
        for k in 1..30 {
            let b: BigRational = (0..=k / 2).map(|j| a(k - 2 * j) / (pow(j) * fact(j))).sum();
            assert!(b.is_zero(), "k={k}");
        }
        let lhs = norm_sequential(&taylor_times_gaussian(&[ONE], 2f64.sqrt(), 31), 2f64.sqrt(), 30).unwrap();
        assert!((lhs.norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sequential_norm_of_basis_functions() {
        for n in 0..=10 {
            // eₙ = cₙ zⁿ exp(−z²)
            let cn = log_basis_coeff(n, 1.0).unwrap().exp();
            let mut p = vec![ZERO; n + 1];
            p[n] = c(cn, 0.0);
            let a = taylor_times_gaussian(&p, 1.0, 31);
            let s = norm_sequential(&a, 1.0, 30).unwrap();
            assert!((s.norm - 1.0).abs() < 1e-9, "n={n}: {}", s.norm);
        }
        // Quadrature oracle agrees for e₂.
        let e2 = HoloFun::unit(w(1.0), Basis::RbfOnb, 2, 3);
        let r = rule(w(1.0));
        let q = inner(&e2, &e2, InnerRoute::Quadrature(&r)).unwrap().re.sqrt();
        assert!((q - 1.0).abs() < 1e-9);
    }

    #[test]
    fn sequential_flags_divergent_series() {
        // exp(z²) is not in H_1: the Fock-side function is exp(2z²).
        let a: Vec<Complex64> = (0..81)
            .map(|k| if k % 2 == 0 { c((-ln_factorial(k / 2)).exp(), 0.0) } else { ZERO })
            .collect();
        let s = norm_sequential(&a, 1.0, 80).unwrap();
        assert!(!s.converged);
    }

    #[test]
    fn reproducing_property() {
        let width = w(1.0);
        let r = rule(width);
        let e0 = HoloFun::unit(width, Basis::RbfOnb, 0, 1);
        assert!((reproduce(&e0, ZERO, &r).unwrap() - ONE).norm() < 1e-8);
        let e3 = HoloFun::unit(width, Basis::RbfOnb, 3, 4);
        let p = c(0.4, -0.2);
        assert!((reproduce(&e3, p, &r).unwrap() - e3.eval(p)).norm() < 1e-7);
        let zero = HoloFun::zero(width, Basis::RbfOnb, 5);
        assert_eq!(reproduce(&zero, c(1.0, 1.0), &r).unwrap(), ZERO);
    }

    #[test]
    fn coherent_states() {
        let width = w(1.0);
        let k0 = coherent_coeffs(width, ZERO, 8).unwrap();
        assert_eq!(k0.coeffs()[0], ONE);
        assert!(k0.coeffs()[1..].iter().all(|v| *v == ZERO));

        let z = c(0.5, 0.0);
        let p = c(0.2, 0.1);
        let kp = coherent_coeffs(width, p, 40).unwrap();
        let kz = coherent_coeffs(width, z, 40).unwrap();
        // ⟨K^w, K^z⟩ = K^w(z) = K(z, w).
        let ip = inner(&kp, &kz, InnerRoute::Coefficient).unwrap();
        assert!((ip - rbf_kernel(1.0, z, p)).norm() < 1e-9);
        for q in [c(0.3, 0.3), c(-1.0, 0.5), c(1.2, -0.7)] {
            assert!((kp.eval(q) - rbf_kernel(1.0, q, p)).norm() < 1e-9);
        }
    }

    #[test]
    fn pointwise_bound() {
        let e0 = HoloFun::unit(w(1.0), Basis::RbfOnb, 0, 1);
        for y in [0.0, 0.5, 1.0, 2.0] {
            let (lhs, rhs) = bound_check(&e0, c(0.0, y)).unwrap();
            assert_relative_eq!(lhs, (y * y).exp(), max_relative = 1e-14);
            assert_relative_eq!(rhs, (2.0 * y * y).exp(), max_relative = 1e-14);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let f = HoloFun::new(w(1.0), Basis::RbfOnb, random_coeffs(&mut rng, 10)).unwrap();
            let x = rng.gen_range(-4.0..4.0);
            let (lhs, rhs) = bound_check(&f, c(x, 0.0)).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-10));
            assert_eq!(rhs, f.onb_norm().unwrap());
        }
        // A coherent state at z comes within truncation of the bound.
        let z = c(0.3, 0.8);
        let k = coherent_coeffs(w(1.0), z, 60).unwrap();
        let (lhs, rhs) = bound_check(&k, z).unwrap();
        assert!(lhs / rhs <= 1.0 + 1e-10 && lhs / rhs > 1.0 - 1e-9);
    }

    #[test]
    fn projection_recovers_polynomial() {
        let width = w(1.0);
        let r = rule(width);
        let f = HoloFun::new(width, Basis::FockOnb, vec![c(0.3, 0.1), c(-1.0, 0.0), ZERO, c(0.0, 2.0)]).unwrap();
        let p = fock_projection(|z| f.eval(z), width, 8, &r).unwrap();
        assert!(coeff_distance(&p, f.coeffs()) < 1e-12);
        let n = fock_quadrature_norm(|z| f.eval(z), width, &r).unwrap();
        assert!((n - f.onb_norm().unwrap()).abs() < 1e-12);
    }
}
