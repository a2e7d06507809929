use proptest::prelude::*;
use rbf_fock::kernels::{factorization_residual, rbf_kernel};
use rbf_fock::operators::weyl_semigroup_phase;
use rbf_fock::spaces::{to_fock, to_rbf, to_taylor};
use rbf_fock::transforms::fourier_rbf;
use rbf_fock::{Basis, Complex64, HoloFun, Width};

fn complex(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| Complex64::new(a, b))
}

fn gamma() -> impl Strategy<Value = f64> {
    0.5f64..3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_hermitian(g in gamma(), z in complex(2.0), w in complex(2.0)) {
        let a = rbf_kernel(g, z, w);
        let b = rbf_kernel(g, w, z).conj();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn kernel_factorizes(g in gamma(), z in complex(1.5), w in complex(1.5)) {
        prop_assert!(factorization_residual(g, z, w) < 1e-10);
    }

    #[test]
    fn multiplication_round_trip(g in gamma(), c in prop::collection::vec(complex(1.0), 1..12)) {
        let f = HoloFun::new(Width::new(g).unwrap(), Basis::RbfOnb, c).unwrap();
        let back = to_rbf(&to_fock(&f).unwrap()).unwrap();
        prop_assert!(back.distance(&f).unwrap() < 1e-14);
        prop_assert!((to_fock(&f).unwrap().onb_norm().unwrap() - f.onb_norm().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn taylor_evaluation_matches(g in 1.0f64..3.0, c in prop::collection::vec(complex(1.0), 1..8), z in complex(1.0)) {
        let f = HoloFun::new(Width::new(g).unwrap(), Basis::FockOnb, c).unwrap();
        let t = to_taylor(&f, f.len());
        prop_assert!((t.eval(z) - f.eval(z)).norm() < 1e-10);
    }

    #[test]
    fn fourier_is_unitary(g in gamma(), c in prop::collection::vec(complex(1.0), 1..12)) {
        let f = HoloFun::new(Width::new(g).unwrap(), Basis::RbfOnb, c).unwrap();
        let h = fourier_rbf(&f).unwrap();
        prop_assert!((h.onb_norm().unwrap() - f.onb_norm().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn semigroup_phase_is_unimodular(g in gamma(), a in complex(2.0), b in complex(2.0)) {
        let p = weyl_semigroup_phase(g, a, b).unwrap();
        prop_assert!((p.norm() - 1.0).abs() < 1e-12);
        let q = weyl_semigroup_phase(g, b, a).unwrap();
        prop_assert!((p * q - 1.0).norm() < 1e-12);
    }
}
