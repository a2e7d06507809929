//! Closed-form kernels.
//!
//! * Fock kernel `F_α(z,w) = exp(α z w̄)`
//! * complex Gaussian RBF kernel `K_γ(z,w) = exp(-(z - w̄)²/γ²)`
//! * Segal-Bargmann kernel `A_SB^α(z,x)` and its RBF counterpart
//!   `A_RBF^γ(z,x) = exp(-(x - √2 z)²/γ²)`
//!
//! together with the Mercer partial sums over the RBF orthonormal basis and
//! Gram matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};
use crate::numerics::log_basis_coeff;
use crate::params::Convention;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

pub fn fock_kernel(alpha: f64, z: Complex64, w: Complex64) -> Complex64 {
    (z * w.conj() * alpha).exp()
}

/// Normalized Fock kernel `f_w^α(z) = exp(α(z w̄ − |w|²/2))`, a unit vector
/// in `F_α`.
pub fn normalized_fock_state(alpha: f64, w: Complex64, z: Complex64) -> Complex64 {
    ((z * w.conj() - 0.5 * w.norm_sqr()) * alpha).exp()
}

pub fn rbf_kernel(gamma: f64, z: Complex64, w: Complex64) -> Complex64 {
    let d = z - w.conj();
    (-(d * d) / (gamma * gamma)).exp()
}

fn relative_gap(lhs: Complex64, rhs: Complex64) -> f64 {
    let scale = lhs.norm().max(rhs.norm());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE)
    }
}

/// Residual of the factorization `K_γ(z,w) = exp(-(z²+w̄²)/γ²) F_{2/γ²}(z,w)`
/// and of its inverse form `F_α = exp(α(z²+w̄²)/2) K_{√(2/α)}`.
///
/// Both sides grow like `exp(|z−w̄|²/γ²)`, so the residual is relative to
/// the larger side; the maximum over the two identities is returned.
pub fn factorization_residual(gamma: f64, z: Complex64, w: Complex64) -> f64 {
    let g2 = gamma * gamma;
    let alpha = 2.0 / g2;
    let wc = w.conj();
    let sq = z * z + wc * wc;

    let k = rbf_kernel(gamma, z, w);
    let forward = (-sq / g2).exp() * fock_kernel(alpha, z, w);

    let f = fock_kernel(alpha, z, w);
    let back = (sq * (alpha / 2.0)).exp() * rbf_kernel((2.0 / alpha).sqrt(), z, w);

    relative_gap(k, forward).max(relative_gap(f, back))
}

/// Segal-Bargmann kernel `A_SB^α(z,x) = exp(-(α/2)(z²+x²) + √2 α z x)`,
/// times `(α/π)^{1/4}` under [`Convention::BargmannNormalized`].
pub fn sb_kernel(alpha: f64, z: Complex64, x: f64, convention: Convention) -> Complex64 {
    let e = -(z * z + x * x) * (alpha / 2.0) + z * (SQRT_2 * alpha * x);
    e.exp() * convention.prefactor(alpha)
}

/// RBF Segal-Bargmann kernel `A_RBF^γ(z,x) = exp(-(x − √2 z)²/γ²)`, times
/// `(2/(πγ²))^{1/4}` under [`Convention::BargmannNormalized`].
pub fn rbf_sb_kernel(gamma: f64, z: Complex64, x: f64, convention: Convention) -> Complex64 {
    let g2 = gamma * gamma;
    let d = Complex64::new(x, 0.0) - z * SQRT_2;
    (-(d * d) / g2).exp() * convention.prefactor(2.0 / g2)
}

/// `Σ_{n<N} e_n^γ(z) e_n^γ(w̄)`.
///
/// Terms are formed in log scale, `2 log cₙ + n log(z w̄)`, and accumulated
/// from the largest modulus down.
pub fn mercer_partial(gamma: f64, z: Complex64, w: Complex64, n_terms: usize) -> Result<Complex64> {
    let gamma = check_positive("gamma", gamma)?;
    if n_terms == 0 {
        return Err(Error::Domain { name: "N", value: 0.0 });
    }
    let wc = w.conj();
    let g2 = gamma * gamma;
    let envelope = (-(z * z + wc * wc) / g2).exp();
    let prod = z * wc;

    let mut terms: Vec<(f64, Complex64)> = Vec::with_capacity(n_terms);
    terms.push((0.0, Complex64::new(1.0, 0.0)));
    if prod != Complex64::new(0.0, 0.0) {
        let (r, theta) = prod.to_polar();
        let ln_r = r.ln();
        for n in 1..n_terms {
            let nf = n as f64;
            let log_mag = 2.0 * log_basis_coeff(n, gamma)? + nf * ln_r;
            terms.push((log_mag, Complex64::from_polar(log_mag.exp(), nf * theta)));
        }
    }
    terms.sort_by(|a, b| b.0.total_cmp(&a.0));
    let sum: Complex64 = terms.into_iter().map(|(_, t)| t).sum();
    Ok(sum * envelope)
}

/// Gram matrix `G[i][j] = K_γ(pᵢ, pⱼ)` with its spectrum summary.
#[derive(Debug, Clone)]
pub struct Gram {
    pub matrix: DMatrix<Complex64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Count of eigenvalues above `1e-10 · max_eigenvalue`.
    pub numerical_rank: usize,
}

impl Gram {
    pub fn is_rank_deficient(&self) -> bool {
        self.numerical_rank < self.matrix.nrows()
    }
}

/// Gram matrix over `points`, from the closed form or, when `trunc` is
/// given, from the Mercer partial sum with that many terms.
pub fn gram(gamma: f64, points: &[Complex64], trunc: Option<usize>) -> Result<Gram> {
    let gamma = check_positive("gamma", gamma)?;
    if points.is_empty() {
        return Err(Error::Domain {
            name: "points (empty)",
            value: 0.0,
        });
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::NonFinite { node: *p });
    }
    let n = points.len();
    let mut matrix = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        for j in i..n {
            let v = match trunc {
                Some(t) => mercer_partial(gamma, points[i], points[j], t)?,
                None => rbf_kernel(gamma, points[i], points[j]),
            };
            matrix[(i, j)] = v;
            matrix[(j, i)] = v.conj();
        }
        // The diagonal K(z,z) = exp(4y²/γ²) is real.
        matrix[(i, i)].im = 0.0;
    }
    let eig = SymmetricEigen::new(matrix.clone()).eigenvalues;
    let min_eigenvalue = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max_eigenvalue = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = 1e-10 * max_eigenvalue.abs();
    let numerical_rank = eig.iter().filter(|&&v| v > cutoff).count();
    Ok(Gram {
        matrix,
        min_eigenvalue,
        max_eigenvalue,
        numerical_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_c, Quad2D};
    use crate::hermite::hermite_fns;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
        loop {
            let z = c(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
            if z.norm() <= radius {
                return z;
            }
        }
    }

    #[test]
    fn fock_kernel_examples() {
        assert_eq!(fock_kernel(2.0, c(0.0, 0.0), c(0.3, -1.1)), c(1.0, 0.0));
        // z w̄ = 1·(−i) = −i, so exp(−2i) = cos 2 − i sin 2.
        let v = fock_kernel(2.0, c(1.0, 0.0), c(0.0, 1.0));
        assert_relative_eq!(v.re, -0.4161468365471424, epsilon = 1e-15);
        assert_relative_eq!(v.im, -0.9092974268256817, epsilon = 1e-15);
        let v = fock_kernel(1.0, c(1.0, 1.0), c(1.0, 1.0));
        assert_relative_eq!(v.re, 2f64.exp(), max_relative = 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn normalized_state_examples() {
        assert_eq!(normalized_fock_state(2.0, c(0.0, 0.0), c(1.3, 0.2)), c(1.0, 0.0));
        assert_relative_eq!(
            normalized_fock_state(2.0, c(1.0, 0.0), c(1.0, 0.0)).re,
            std::f64::consts::E,
            max_relative = 1e-15
        );
        let alpha = 2.0;
        let w = c(0.7, 0.3);
        let rule = Quad2D::radial(48, alpha).unwrap();
        let norm2 = integrate_c(|z| c(normalized_fock_state(alpha, w, z).norm_sqr(), 0.0), &rule).unwrap();
        assert!((norm2.re * alpha / PI - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rbf_kernel_examples() {
        assert_relative_eq!(rbf_kernel(1.0, c(0.0, 0.0), c(1.0, 0.0)).re, (-1f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(rbf_kernel(1.0, c(0.0, 1.0), c(0.0, 0.0)).re, 1f64.exp(), max_relative = 1e-15);
        // (1 − conj(i))² = (1+i)² = 2i.
        let v = rbf_kernel(1.0, c(1.0, 0.0), c(0.0, 1.0));
        let expect = c(0.0, -2.0).exp();
        assert!((v - expect).norm() < 1e-15);
        // Real arguments give the usual real kernel.
        for (x, y, g) in [(0.3, -1.2, 0.7), (2.0, 2.5, 1.5)] {
            let v = rbf_kernel(g, c(x, 0.0), c(y, 0.0));
            assert_eq!(v.im, 0.0);
            assert_relative_eq!(v.re, (-(x - y) * (x - y) / (g * g)).exp(), max_relative = 1e-15);
        }
    }

    #[test]
    fn factorization() {
        assert!(factorization_residual(1.0, c(1.0, 0.0), c(0.0, 1.0)) < 1e-14);
        assert_eq!(factorization_residual(0.5, c(0.0, 0.0), c(0.0, 0.0)), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let z = random_point(&mut rng, 2.0);
            let w = random_point(&mut rng, 2.0);
            for g in [0.5, 1.0, 2.0] {
                worst = worst.max(factorization_residual(g, z, w));
            }
        }
        assert!(worst < 1e-12, "worst {worst:e}");
    }

    #[test]
    fn hermitian_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let z = random_point(&mut rng, 2.0);
            let w = random_point(&mut rng, 2.0);
            for g in [0.5, 1.0, 2.0] {
                let a = rbf_kernel(g, z, w);
                let b = rbf_kernel(g, w, z).conj();
                assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
                let a = fock_kernel(2.0 / (g * g), z, w);
                let b = fock_kernel(2.0 / (g * g), w, z).conj();
                assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn sb_kernel_examples() {
        assert_eq!(sb_kernel(2.0, c(0.0, 0.0), 0.0, Convention::Unnormalized), c(1.0, 0.0));
        assert_relative_eq!(
            sb_kernel(2.0, c(0.0, 0.0), 0.0, Convention::BargmannNormalized).re,
            0.8932438417380023,
            max_relative = 1e-15
        );
    }

    #[test]
    fn sb_kernel_is_hermite_generating_function() {
        let alpha = 2.0;
        let z = c(0.4, 0.2);
        let x = 0.7;
        let psi = hermite_fns(40, alpha, x);
        let mut series = c(0.0, 0.0);
        let mut zpow = c(1.0, 0.0);
        for (n, p) in psi.iter().enumerate() {
            let coef = (n as f64 * alpha.ln() - crate::numerics::ln_factorial(n)).mul_add(0.5, 0.0).exp();
            series += zpow * coef * *p;
            zpow *= z;
        }
        let closed = sb_kernel(alpha, z, x, Convention::BargmannNormalized);
        assert!((series - closed).norm() < 1e-9);
    }

    #[test]
    fn rbf_sb_kernel_examples() {
        for &x in &[-1.5, 0.0, 0.3, 2.2] {
            let v = rbf_sb_kernel(1.0, c(0.0, 0.0), x, Convention::Unnormalized);
            assert_relative_eq!(v.re, (-x * x).exp(), max_relative = 1e-15);
            let on_line = c(x / SQRT_2, 0.0);
            assert_relative_eq!(rbf_sb_kernel(1.0, on_line, x, Convention::Unnormalized).re, 1.0, max_relative = 1e-15);
            assert_relative_eq!(
                rbf_sb_kernel(1.0, on_line, x, Convention::BargmannNormalized).re,
                (2.0 / PI).powf(0.25),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn rbf_sb_factors_through_sb() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let z = random_point(&mut rng, 1.5);
            let x = rng.gen_range(-3.0..3.0);
            for g in [0.5f64, 1.0, 2.0] {
                for conv in [Convention::Unnormalized, Convention::BargmannNormalized] {
                    let lhs = rbf_sb_kernel(g, z, x, conv);
                    let rhs = (-(z * z) / (g * g)).exp() * sb_kernel(2.0 / (g * g), z, x, conv);
                    assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn mercer_examples() {
        assert_eq!(mercer_partial(1.0, c(0.0, 0.0), c(0.0, 0.0), 1).unwrap(), c(1.0, 0.0));
        let z = c(0.5, 0.0);
        let w = c(0.3, 0.1);
        let v = mercer_partial(1.0, z, w, 30).unwrap();
        assert!((v - rbf_kernel(1.0, z, w)).norm() < 1e-10);
        assert!(mercer_partial(1.0, z, w, 0).is_err());
    }

    #[test]
    fn mercer_error_decreases() {
        let z = c(0.8, -0.4);
        let w = c(-0.5, 0.6);
        let exact = rbf_kernel(1.0, z, w);
        let errs: Vec<f64> = [2, 4, 8, 16, 32]
            .iter()
            .map(|&n| (mercer_partial(1.0, z, w, n).unwrap() - exact).norm())
            .collect();
        for pair in errs.windows(2) {
            assert!(pair[1] < pair[0], "{errs:?}");
        }
    }

    #[test]
    fn mercer_converges_at_forty_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let z = random_point(&mut rng, 1.5);
            let w = random_point(&mut rng, 1.5);
            for g in [1.0, 2.0] {
                let e = (mercer_partial(g, z, w, 40).unwrap() - rbf_kernel(g, z, w)).norm();
                assert!(e < 1e-8, "g={g} z={z} w={w} err={e:e}");
            }
        }
    }

    #[test]
    fn narrow_width_needs_more_terms() {
        // At γ = 0.5 the terms are (8|z w̄|)ⁿ/n!; with |z w̄| near 2.25 the
        // 40-term remainder is O(10²), and it only drops below 1e-8 by n ≈ 80.
        let (z, w) = (c(1.06, -1.06), c(-1.06, -1.06));
        let exact = rbf_kernel(0.5, z, w);
        assert!((mercer_partial(0.5, z, w, 40).unwrap() - exact).norm() > 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let z = random_point(&mut rng, 1.5);
            let w = random_point(&mut rng, 1.5);
            // Cancellation floor: the terms add up to exp(α|z||w|) in modulus.
            let wc = w.conj();
            let scale = (8.0 * z.norm() * w.norm()).exp() * (-(z * z + wc * wc) * 4.0).exp().norm();
            let e = (mercer_partial(0.5, z, w, 90).unwrap() - rbf_kernel(0.5, z, w)).norm();
            assert!(e < 1e-8 * scale.max(1.0), "z={z} w={w} err={e:e}");
        }
    }

    #[test]
    fn gram_examples() {
        let g = gram(1.0, &[c(0.0, 0.0)], None).unwrap();
        assert_eq!(g.matrix[(0, 0)], c(1.0, 0.0));
        assert_relative_eq!(g.min_eigenvalue, 1.0, max_relative = 1e-15);

        // [[1, e⁻¹], [e⁻¹, 1]] has eigenvalues 1 ± e⁻¹.
        let g = gram(1.0, &[c(0.0, 0.0), c(1.0, 0.0)], None).unwrap();
        let e = (-1f64).exp();
        assert_relative_eq!(g.matrix[(0, 1)].re, e, max_relative = 1e-15);
        assert_relative_eq!(g.min_eigenvalue, 1.0 - e, max_relative = 1e-13);
        assert_relative_eq!(g.max_eigenvalue, 1.0 + e, max_relative = 1e-13);

        assert!(gram(1.0, &[], None).is_err());
    }

    #[test]
    fn gram_psd_on_real_points() {
        let pts: Vec<Complex64> = (0..20).map(|i| c(-2.0 + 4.0 * i as f64 / 19.0, 0.0)).collect();
        for g in [0.5, 1.0, 2.0] {
            let gm = gram(g, &pts, None).unwrap();
            assert!(gm.min_eigenvalue >= -1e-10, "g={g}: {}", gm.min_eigenvalue);
        }
    }

    #[test]
    fn gram_complex_points_hermitian_psd() {
        let pts = [c(0.1, 0.2), c(-0.4, 0.5), c(0.9, -0.3), c(0.0, 0.0)];
        let gm = gram(1.0, &pts, None).unwrap();
        assert_eq!(gm.matrix, gm.matrix.adjoint());
        assert!(gm.min_eigenvalue > -1e-10);
        let via_mercer = gram(1.0, &pts, Some(40)).unwrap();
        assert!((&via_mercer.matrix - &gm.matrix).norm() < 1e-9);
    }

    #[test]
    fn duplicate_points_reported_not_rejected() {
        let gm = gram(1.0, &[c(0.5, 0.0), c(0.5, 0.0)], None).unwrap();
        assert!(gm.is_rank_deficient());
        assert!(gm.min_eigenvalue.abs() < 1e-12);
    }
}
