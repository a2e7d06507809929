//! Segal-Bargmann transforms between `L²(ℝ)` and the Fock / RBF spaces, the
//! feature map, and the Fourier transform carried over to `H_γ`.
//!
//! On orthonormal coefficients every transform here is a diagonal map:
//! `ψₙ ↦ uₙ`, `ψₙ ↦ eₙ`, and Fourier multiplies by `(-i)ⁿ`. The quadrature
//! routes evaluate the defining integrals and project back, so the two routes
//! check each other.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{coeff_distance, fourier_l2, hermite_expand, minus_i_pow, tail_mass, L2Sig, DEFAULT_TRUNC};
use crate::kernels::{rbf_sb_kernel, sb_kernel};
use crate::numerics::{gauss_hermite, Quad1D, Quad2D, DEFAULT_QUAD_C, DEFAULT_QUAD_R};
use crate::params::{Convention, Width};
use crate::spaces::{fock_projection, to_rbf, Basis, HoloFun};
use crate::{Projected, Warning, TRUNCATION_WARN};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How a transform is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Diagonal map on orthonormal coefficients.
    Coefficient,
    /// Defining integral by quadrature, projected onto the first `N` basis
    /// functions.
    Quadrature,
}

/// Routes for the RBF Segal-Bargmann transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbfRoute {
    Coefficient,
    /// Integrate `A_RBF^γ(z,x) φ(x)` directly.
    QuadratureI,
    /// Classical transform by quadrature, then multiply by `exp(-z²/γ²)`.
    DiagramII,
}

/// Tolerance used by [`TransformContext::rbf_bargmann_checked`] by default.
pub const ROUTE_TOL: f64 = 1e-7;

/// Width, kernel convention, truncation and quadrature rules shared by the
/// transforms.
#[derive(Debug, Clone)]
pub struct TransformContext {
    width: Width,
    convention: Convention,
    trunc: usize,
    rule_r: Quad1D,
    rule_c: Quad2D,
}

impl TransformContext {
    pub fn new(gamma: f64, convention: Convention, trunc: usize) -> Result<Self> {
        Self::with_quadrature(gamma, convention, trunc, DEFAULT_QUAD_R, DEFAULT_QUAD_C)
    }

    pub fn with_quadrature(gamma: f64, convention: Convention, trunc: usize, quad_r: usize, quad_c: usize) -> Result<Self> {
        let width = Width::new(gamma)?;
        if trunc == 0 {
            return Err(Error::Domain { name: "N", value: 0.0 });
        }
        let alpha = width.alpha();
        Ok(TransformContext {
            width,
            convention,
            trunc,
            rule_r: gauss_hermite(quad_r, alpha)?,
            rule_c: Quad2D::radial(quad_c, alpha)?,
        })
    }

    pub fn default_for(gamma: f64) -> Result<Self> {
        Self::new(gamma, Convention::default(), DEFAULT_TRUNC)
    }

    pub fn width(&self) -> Width {
        self.width
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn rule_r(&self) -> &Quad1D {
        &self.rule_r
    }

    pub fn rule_c(&self) -> &Quad2D {
        &self.rule_c
    }

    fn alpha(&self) -> f64 {
        self.width.alpha()
    }

    fn check_sig(&self, sig: &L2Sig) -> Result<()> {
        let alpha = self.alpha();
        if (sig.alpha() - alpha).abs() > 1e-12 * alpha {
            return Err(Error::WidthMismatch {
                left: self.width.gamma(),
                right: (2.0 / sig.alpha()).sqrt(),
            });
        }
        Ok(())
    }

    fn check_fun(&self, f: &HoloFun, basis: Basis) -> Result<()> {
        if !f.width().same_space(&self.width) {
            return Err(Error::WidthMismatch {
                left: self.width.gamma(),
                right: f.width().gamma(),
            });
        }
        if f.basis() != basis {
            return Err(Error::Basis {
                expected: match basis {
                    Basis::RbfOnb => "rbf-onb",
                    Basis::FockOnb => "fock-onb",
                    Basis::Taylor => "taylor",
                },
                found: f.basis(),
            });
        }
        Ok(())
    }

    /// Factor by which the unnormalized kernel scales the normalized transform.
    fn offset(&self) -> Option<f64> {
        match self.convention {
            Convention::BargmannNormalized => None,
            Convention::Unnormalized => Some((self.alpha() / std::f64::consts::PI).powf(-0.25)),
        }
    }

    fn finish<T>(&self, value: T, coeffs: &[Complex64], offset: Option<f64>) -> Projected<T> {
        let tail = tail_mass(coeffs);
        let mut warnings = Vec::new();
        if tail > TRUNCATION_WARN {
            warnings.push(Warning::Truncation { tail });
        }
        if let Some(factor) = offset {
            warnings.push(Warning::ConventionOffset { factor });
        }
        Projected { value, tail, warnings }
    }

    /// `(xⱼ, flat weight · φ(xⱼ))` on the real rule.
    fn weighted_samples(&self, sig: &L2Sig) -> Vec<(f64, Complex64)> {
        self.rule_r
            .nodes()
            .iter()
            .zip(self.rule_r.flat_weights())
            .map(|(&x, &w)| (x, sig.value(x) * w))
            .collect()
    }

    /// `B_α φ(z) = ∫ A_SB^α(z,x) φ(x) dx` at one point.
    pub fn bargmann_at(&self, sig: &L2Sig, z: Complex64) -> Result<Complex64> {
        self.check_sig(sig)?;
        let samples = self.weighted_samples(sig);
        Ok(sum_kernel(&samples, |x| sb_kernel(self.alpha(), z, x, self.convention)))
    }

    /// `𝔅 φ(z) = ∫ A_RBF^γ(z,x) φ(x) dx` at one point.
    pub fn rbf_bargmann_at(&self, sig: &L2Sig, z: Complex64) -> Result<Complex64> {
        self.check_sig(sig)?;
        let samples = self.weighted_samples(sig);
        Ok(sum_kernel(&samples, |x| rbf_sb_kernel(self.width.gamma(), z, x, self.convention)))
    }

    /// Classical Segal-Bargmann transform into `F_α`, in `FockOnb`.
    pub fn bargmann(&self, sig: &L2Sig, route: Route) -> Result<Projected<HoloFun>> {
        self.check_sig(sig)?;
        let coeffs = match route {
            Route::Coefficient => {
                let s = self.offset().unwrap_or(1.0);
                sig.coeffs().iter().map(|c| c * s).collect()
            }
            Route::Quadrature => {
                let samples = self.weighted_samples(sig);
                let (alpha, conv) = (self.alpha(), self.convention);
                fock_projection(
                    |z| sum_kernel(&samples, |x| sb_kernel(alpha, z, x, conv)),
                    self.width,
                    self.trunc,
                    &self.rule_c,
                )?
            }
        };
        let f = HoloFun::new(self.width, Basis::FockOnb, coeffs)?;
        Ok(self.finish_route(f, route))
    }

    fn finish_route(&self, f: HoloFun, route: Route) -> Projected<HoloFun> {
        match route {
            Route::Coefficient => {
                let mut p = Projected::exact(f);
                if let Some(factor) = self.offset() {
                    p.warnings.push(Warning::ConventionOffset { factor });
                }
                p
            }
            Route::Quadrature => {
                let coeffs = f.coeffs().to_vec();
                self.finish(f, &coeffs, self.offset())
            }
        }
    }

    /// RBF Segal-Bargmann transform `L²(ℝ) → H_γ`, in `RbfOnb`.
    pub fn rbf_bargmann(&self, sig: &L2Sig, route: RbfRoute) -> Result<Projected<HoloFun>> {
        self.check_sig(sig)?;
        match route {
            RbfRoute::Coefficient => {
                let p = self.bargmann(sig, Route::Coefficient)?;
                let v = to_rbf(&p.value)?;
                Ok(Projected { value: v, ..p })
            }
            RbfRoute::DiagramII => {
                let p = self.bargmann(sig, Route::Quadrature)?;
                let v = to_rbf(&p.value)?;
                Ok(Projected { value: v, ..p })
            }
            RbfRoute::QuadratureI => {
                let samples = self.weighted_samples(sig);
                let (gamma, g2, conv) = (self.width.gamma(), self.width.gamma_sq(), self.convention);
                let coeffs = fock_projection(
                    |z| {
                        let f = sum_kernel(&samples, |x| rbf_sb_kernel(gamma, z, x, conv));
                        f * (z * z / g2).exp()
                    },
                    self.width,
                    self.trunc,
                    &self.rule_c,
                )?;
                let f = HoloFun::new(self.width, Basis::RbfOnb, coeffs)?;
                Ok(self.finish_route(f, Route::Quadrature))
            }
        }
    }

    /// ℓ² distance between the quadrature-I and diagram-II outputs.
    pub fn route_coincidence(&self, sig: &L2Sig) -> Result<f64> {
        let a = self.rbf_bargmann(sig, RbfRoute::QuadratureI)?.value;
        let b = self.rbf_bargmann(sig, RbfRoute::DiagramII)?.value;
        a.distance(&b)
    }

    /// All three routes; fails with [`Error::Inconsistent`] when any two
    /// differ by more than `tol`, otherwise returns the coefficient route.
    pub fn rbf_bargmann_checked(&self, sig: &L2Sig, tol: f64) -> Result<Projected<HoloFun>> {
        let coef = self.rbf_bargmann(sig, RbfRoute::Coefficient)?;
        let q1 = self.rbf_bargmann(sig, RbfRoute::QuadratureI)?.value;
        let d2 = self.rbf_bargmann(sig, RbfRoute::DiagramII)?.value;
        let residual = coef
            .value
            .distance(&q1)?
            .max(coef.value.distance(&d2)?)
            .max(q1.distance(&d2)?);
        if residual > tol {
            return Err(Error::Inconsistent {
                what: "rbf segal-bargmann routes",
                residual,
                tolerance: tol,
            });
        }
        Ok(coef)
    }

    /// Inverse (and adjoint) of the RBF Segal-Bargmann transform.
    ///
    /// The quadrature route evaluates
    /// `φ(x) = (2/(πγ²)) (2/(πγ²))^{1/4} ∫ conj(A_RBF^γ(z,x)) f(z) exp((z−z̄)²/γ²) dA(z)`
    /// with the bare kernel `A_RBF^γ`, on the Fock side, and expands the
    /// result in Hermite functions; the returned signal keeps that pointwise
    /// evaluator as its sampler. Under the unnormalized convention the result is
    /// divided by the forward offset so that it inverts [`Self::rbf_bargmann`].
    pub fn rbf_bargmann_inverse(&self, f: &HoloFun, route: Route) -> Result<Projected<L2Sig>> {
        self.check_fun(f, Basis::RbfOnb)?;
        let alpha = self.alpha();
        let inv = self.offset().map(|o| 1.0 / o);
        let s = inv.unwrap_or(1.0);
        match route {
            Route::Coefficient => {
                let sig = L2Sig::new(alpha, f.coeffs().iter().map(|c| c * s).collect())?;
                let mut p = Projected::exact(sig);
                if let Some(factor) = inv {
                    p.warnings.push(Warning::ConventionOffset { factor });
                }
                Ok(p)
            }
            Route::Quadrature => {
                let scale = s * alpha / std::f64::consts::PI;
                let mut nodes = Vec::with_capacity(self.rule_c.len());
                for (z, w) in self.rule_c.points() {
                    let v = f.eval_fock_side(z);
                    if !v.is_finite() {
                        return Err(Error::NonFinite { node: z });
                    }
                    nodes.push((z, v * (w * scale)));
                }
                let nodes = Arc::new(nodes);
                let pointwise = move |x: f64| -> Complex64 {
                    nodes
                        .iter()
                        .map(|(z, v)| sb_kernel(alpha, *z, x, Convention::BargmannNormalized).conj() * v)
                        .sum()
                };
                let sig = hermite_expand(pointwise, alpha, self.trunc, &self.rule_r)?;
                let coeffs = sig.coeffs().to_vec();
                Ok(self.finish(sig, &coeffs, inv))
            }
        }
    }

    /// `⟨Φ(z), Φ(w)⟩_{L²} = ∫ conj(Φ(z)(x)) Φ(w)(x) dx`, `Φ(z) = A_RBF^γ(z,·)`.
    pub fn feature_inner(&self, z: Complex64, w: Complex64) -> Complex64 {
        feature_inner_with(self.width, z, w, self.convention, &self.rule_r)
    }

    /// Fourier transform on `H_γ`.
    ///
    /// The quadrature route projects `exp(-2z²/γ²) f(-iz)` onto the basis.
    pub fn fourier_rbf(&self, f: &HoloFun, route: Route) -> Result<Projected<HoloFun>> {
        self.check_fun(f, Basis::RbfOnb)?;
        match route {
            Route::Coefficient => Ok(Projected::exact(fourier_rbf(f)?)),
            Route::Quadrature => {
                let g2 = self.width.gamma_sq();
                let coeffs = fock_projection(
                    |z| (z * z / g2).exp() * fourier_rbf_at(f, z),
                    self.width,
                    self.trunc,
                    &self.rule_c,
                )?;
                let out = HoloFun::new(self.width, Basis::RbfOnb, coeffs)?;
                let tail = tail_mass(out.coeffs());
                let warnings = if tail > TRUNCATION_WARN {
                    vec![Warning::Truncation { tail }]
                } else {
                    Vec::new()
                };
                Ok(Projected {
                    value: out,
                    tail,
                    warnings,
                })
            }
        }
    }

    /// Distance between `S_γ(𝔅 φ)` by quadrature and `𝔅(F_α φ)` by
    /// coefficients.
    pub fn fourier_diagram_residual(&self, sig: &L2Sig) -> Result<f64> {
        self.check_sig(sig)?;
        let normalized = TransformContext {
            convention: Convention::BargmannNormalized,
            ..self.clone()
        };
        let f = normalized.rbf_bargmann(sig, RbfRoute::Coefficient)?.value;
        let lhs = normalized.fourier_rbf(&f, Route::Quadrature)?.value;
        let rhs = normalized.rbf_bargmann(&fourier_l2(sig), RbfRoute::Coefficient)?.value;
        Ok(coeff_distance(lhs.coeffs(), rhs.coeffs()))
    }
}

fn sum_kernel(samples: &[(f64, Complex64)], kernel: impl Fn(f64) -> Complex64) -> Complex64 {
    samples.iter().fold(ZERO, |acc, (x, v)| acc + kernel(*x) * v)
}

fn feature_inner_with(width: Width, z: Complex64, w: Complex64, convention: Convention, rule: &Quad1D) -> Complex64 {
    let alpha = width.alpha();
    let pref = convention.prefactor(alpha);
    let zc = z.conj();
    let s = std::f64::consts::SQRT_2;
    // conj(Φ(z)(x)) Φ(w)(x) exp(αx²) = exp(α(√2 x (z̄+w) − z̄² − w²))
    let sum: Complex64 = rule
        .iter()
        .map(|(x, wt)| ((zc + w) * (s * x) - zc * zc - w * w).scale(alpha).exp() * wt)
        .sum();
    sum * pref * pref
}

/// [`TransformContext::feature_inner`] with a fresh default real rule.
pub fn feature_inner(gamma: f64, z: Complex64, w: Complex64, convention: Convention) -> Result<Complex64> {
    let width = Width::new(gamma)?;
    let rule = gauss_hermite(DEFAULT_QUAD_R, width.alpha())?;
    Ok(feature_inner_with(width, z, w, convention, &rule))
}

/// `‖Φ(z)‖_{L²}`.
pub fn feature_norm(gamma: f64, z: Complex64, convention: Convention) -> Result<f64> {
    Ok(feature_inner(gamma, z, z, convention)?.re.sqrt())
}

/// Fourier transform on `H_γ` by coefficients: `eₙ ↦ (-i)ⁿ eₙ`.
pub fn fourier_rbf(f: &HoloFun) -> Result<HoloFun> {
    if f.basis() != Basis::RbfOnb {
        return Err(Error::Basis {
            expected: "rbf-onb",
            found: f.basis(),
        });
    }
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * minus_i_pow(n))
        .collect();
    HoloFun::new(f.width(), Basis::RbfOnb, coeffs)
}

/// `S_γ f(z) = exp(-2z²/γ²) f(-iz)`.
pub fn fourier_rbf_at(f: &HoloFun, z: Complex64) -> Complex64 {
    let g2 = f.width().gamma_sq();
    (-(z * z) * (2.0 / g2)).exp() * f.eval(Complex64::new(z.im, -z.re))
}
