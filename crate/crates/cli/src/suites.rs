//! Verification suites: each identity becomes a residual compared against a
//! tolerance.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use rbf_fock::hermite::{minus_i_pow, position_matrix, L2Sig};
use rbf_fock::kernels::{factorization_residual, gram, mercer_partial, rbf_kernel};
use rbf_fock::operators::{
    position_identity_residual, position_rbf_matrix, translation_conjugated, translation_rbf, weyl_rbf, weyl_rbf_at,
    weyl_rbf_fn, weyl_semigroup_phase, WeylRoute,
};
use rbf_fock::spaces::{
    bound_check, coherent_coeffs, inner, norm_sequential, reproduce, to_fock, to_rbf, to_taylor, Basis, HoloFun,
    InnerRoute,
};
use rbf_fock::transforms::{fourier_rbf, RbfRoute, Route, TransformContext};
use rbf_fock::{Complex64, Convention, Width};

use crate::config::Settings;
use crate::report::{Case, Environment, Suite, VerificationReport};

pub const SUITES: [&str; 10] = [
    "factorization",
    "isometry",
    "reproducing",
    "mercer",
    "sequential-norm",
    "bargmann",
    "feature-map",
    "weyl",
    "fourier",
    "position",
];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Everything a suite needs at one width.
pub struct SuiteEnv {
    pub gamma: f64,
    pub width: Width,
    pub ctx: TransformContext,
    pub rng: ChaCha8Rng,
    tolerance: Option<f64>,
    cases: Vec<Case>,
}

impl SuiteEnv {
    fn record(&mut self, id: &str, extra: &[(&str, Value)], residual: f64, tolerance: f64) {
        let params = self.params(extra);
        let tol = self.tolerance.unwrap_or(tolerance);
        self.cases.push(Case::new(id, params, residual, tol));
    }

    fn params(&self, extra: &[(&str, Value)]) -> BTreeMap<String, Value> {
        let mut p = BTreeMap::new();
        p.insert("gamma".to_string(), Value::from(self.gamma));
        for (k, v) in extra {
            p.insert(k.to_string(), v.clone());
        }
        p
    }

    fn disk(&mut self, r: f64) -> Complex64 {
        Complex64::from_polar(r * self.rng.gen::<f64>().sqrt(), self.rng.gen_range(0.0..TAU))
    }

    fn coeffs(&mut self, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn rbf(&mut self, n: usize) -> HoloFun {
        let c = self.coeffs(n);
        HoloFun::new(self.width, Basis::RbfOnb, c).expect("finite coefficients")
    }

    fn sig(&mut self, n: usize) -> L2Sig {
        let c = self.coeffs(n);
        L2Sig::new(self.width.alpha(), c).expect("finite coefficients")
    }
}

type SuiteFn = fn(&mut SuiteEnv) -> rbf_fock::Result<()>;

fn suite_fn(name: &str) -> Option<SuiteFn> {
    Some(match name {
        "factorization" => factorization,
        "isometry" => isometry,
        "reproducing" => reproducing,
        "mercer" => mercer,
        "sequential-norm" => sequential_norm,
        "bargmann" => bargmann,
        "feature-map" => feature_map,
        "weyl" => weyl,
        "fourier" => fourier,
        "position" => position,
        _ => return None,
    })
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(ZERO) - b.get(i).copied().unwrap_or(ZERO)).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn factorization(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (z, w) = (env.disk(2.0), env.disk(2.0));
        worst = worst.max(factorization_residual(env.gamma, z, w));
    }
    env.record("rbf-kernel-factorization", &[("samples", 1000.into()), ("radius", 2.0.into())], worst, 1e-12);
    Ok(())
}

fn isometry(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let (mut norms, mut round, mut adjoint): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..50 {
        let f = env.rbf(10);
        let mf = to_fock(&f)?;
        let rule = env.ctx.rule_c();
        let a = inner(&f, &f, InnerRoute::Quadrature(rule))?.re.sqrt();
        let b = inner(&mf, &mf, InnerRoute::Quadrature(rule))?.re.sqrt();
        norms = norms.max((a - b).abs());
        round = round.max(to_rbf(&mf)?.distance(&f)?);
        let h = HoloFun::new(env.width, Basis::FockOnb, env.coeffs(10))?;
        let lhs = inner(&mf, &h, InnerRoute::Coefficient)?;
        let rhs = inner(&f, &to_rbf(&h)?, InnerRoute::Coefficient)?;
        adjoint = adjoint.max((lhs - rhs).norm());
    }
    let p = [("samples", Value::from(50))];
    env.record("fock-norm-equals-rbf-norm", &p, norms, 1e-7);
    env.record("multiplication-round-trip", &p, round, 0.0);
    env.record("multiplication-adjoint", &p, adjoint, 1e-14);
    Ok(())
}

fn reproducing(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let w = env.disk(1.5);
        for n in 0..=10 {
            let en = HoloFun::unit(env.width, Basis::RbfOnb, n, n + 1);
            worst = worst.max((reproduce(&en, w, env.ctx.rule_c())? - en.eval(w)).norm());
        }
    }
    env.record("reproducing-integral", &[("points", 20.into()), ("max_n", 10.into())], worst, 1e-7);

    let mut violations = 0usize;
    for _ in 0..10_000 {
        let f = env.rbf(8);
        let z = Complex64::new(env.rng.gen_range(-3.0..3.0), env.rng.gen_range(-1.5..1.5));
        for p in [z, Complex64::new(z.re, 0.0)] {
            let (lhs, rhs) = bound_check(&f, p)?;
            if lhs > rhs * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    env.record("pointwise-bound-violations", &[("samples", 10_000.into())], violations as f64, 0.0);
    Ok(())
}

fn mercer(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let (mut series, mut coherent): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let (z, w) = (env.disk(1.5), env.disk(1.5));
        let k = rbf_kernel(env.gamma, z, w);
        series = series.max((mercer_partial(env.gamma, z, w, 40)? - k).norm());
        let kz = coherent_coeffs(env.width, z, 60)?;
        let kw = coherent_coeffs(env.width, w, 60)?;
        coherent = coherent.max((inner(&kw, &kz, InnerRoute::Coefficient)? - k).norm());
    }
    env.record("mercer-series", &[("terms", 40.into()), ("radius", 1.5.into())], series, 1e-8);
    env.record("coherent-state-inner-product", &[("terms", 60.into())], coherent, 1e-9);

    let pts: Vec<Complex64> = (0..20).map(|_| Complex64::new(env.rng.gen_range(-3.0..3.0), 0.0)).collect();
    let g = gram(env.gamma, &pts, None)?;
    env.record("gram-psd", &[("points", 20.into())], (-g.min_eigenvalue).max(0.0), 1e-10);
    Ok(())
}

fn sequential_norm(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let mut agree: f64 = 0.0;
    for i in 0..30 {
        let f = env.rbf(1 + i % 6);
        let taylor = to_taylor(&f, 31);
        let s = norm_sequential(taylor.coeffs(), env.gamma, 30)?.norm;
        let coef = f.onb_norm()?;
        let quad = inner(&f, &f, InnerRoute::Quadrature(env.ctx.rule_c()))?.re.sqrt();
        agree = agree.max((s - coef).abs() / coef).max((s - quad).abs() / coef);
    }
    env.record("sequential-norm-agreement", &[("functions", 30.into()), ("kmax", 30.into())], agree, 1e-6);

    let mut unit: f64 = 0.0;
    for n in 0..=10 {
        let en = HoloFun::unit(env.width, Basis::RbfOnb, n, n + 1);
        let s = norm_sequential(to_taylor(&en, 31).coeffs(), env.gamma, 30)?;
        unit = unit.max((s.norm - 1.0).abs());
    }
    env.record("sequential-norm-basis", &[("max_n", 10.into()), ("kmax", 30.into())], unit, 1e-10);
    Ok(())
}

fn bargmann(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let alpha = env.width.alpha();
    let trunc = env.ctx.trunc();
    let mut basis: f64 = 0.0;
    for n in 0..=10.min(trunc - 1) {
        let sig = L2Sig::basis(alpha, n, n + 1)?;
        let mut want = vec![ZERO; trunc.max(n + 1)];
        want[n] = Complex64::new(1.0, 0.0);
        for route in [RbfRoute::Coefficient, RbfRoute::QuadratureI, RbfRoute::DiagramII] {
            let out = env.ctx.rbf_bargmann(&sig, route)?.value;
            let out: Vec<Complex64> = out.coeffs().iter().map(|c| c / env.ctx_offset()).collect();
            basis = basis.max(dist(&out, &want));
        }
    }
    env.record("hermite-to-rbf-basis", &[("max_n", 10.into()), ("routes", 3.into())], basis, 1e-7);

    let (mut unitary, mut routes, mut round, mut adjoint): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let normalized = TransformContext::with_quadrature(
        env.gamma,
        Convention::BargmannNormalized,
        trunc,
        env.ctx.rule_r().len(),
        env.ctx.rule_c().rule_x.len(),
    )?;
    for _ in 0..5 {
        let (s1, s2) = (env.sig(12), env.sig(12));
        let b1 = normalized.rbf_bargmann(&s1, RbfRoute::QuadratureI)?.value;
        let b2 = normalized.rbf_bargmann(&s2, RbfRoute::QuadratureI)?.value;
        unitary = unitary.max((inner(&b1, &b2, InnerRoute::Coefficient)? - s1.inner(&s2)).norm());
        routes = routes.max(normalized.route_coincidence(&s1)?);

        let sig = env.sig(10);
        let f = normalized.rbf_bargmann(&sig, RbfRoute::Coefficient)?.value;
        round = round.max(normalized.rbf_bargmann_inverse(&f, Route::Quadrature)?.value.distance(&sig));
        let h = env.rbf(10);
        let lhs = inner(&f, &h, InnerRoute::Coefficient)?;
        let rhs = sig.inner(&normalized.rbf_bargmann_inverse(&h, Route::Quadrature)?.value);
        adjoint = adjoint.max((lhs - rhs).norm());
    }
    let p = [("samples", Value::from(5))];
    env.record("rbf-bargmann-unitarity", &p, unitary, 1e-9);
    env.record("rbf-bargmann-route-coincidence", &p, routes, 1e-7);
    env.record("rbf-bargmann-inverse-round-trip", &p, round, 1e-8);
    env.record("rbf-bargmann-inverse-adjoint", &p, adjoint, 1e-8);
    Ok(())
}

impl SuiteEnv {
    /// Constant by which the configured convention scales transform output.
    fn ctx_offset(&self) -> f64 {
        match self.ctx.convention() {
            Convention::BargmannNormalized => 1.0,
            Convention::Unnormalized => (self.width.alpha() / PI).powf(-0.25),
        }
    }
}

fn feature_map(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let quad_r = env.ctx.rule_r().len();
    let plain = TransformContext::with_quadrature(env.gamma, Convention::Unnormalized, 8, quad_r, 8)?;
    let norm = TransformContext::with_quadrature(env.gamma, Convention::BargmannNormalized, 8, quad_r, 8)?;
    let want = env.gamma * (PI / 2.0).sqrt();
    let (mut rp, mut rn): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let (z, w) = (env.disk(1.0), env.disk(1.0));
        let k = rbf_kernel(env.gamma, w, z);
        rp = rp.max((plain.feature_inner(z, w) / k - want).norm() / want);
        rn = rn.max((norm.feature_inner(z, w) / k - 1.0).norm());
    }
    let p = [("samples", Value::from(100)), ("radius", Value::from(1.0))];
    env.record("feature-inner-unnormalized", &p, rp, 1e-8);
    env.record("feature-inner-normalized", &p, rn, 1e-8);
    Ok(())
}

fn weyl(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let f = env.rbf(8);
    let (mut iso, mut routes, mut semigroup, mut translation): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..5 {
        let a = env.disk(0.5 * env.gamma);
        let p = weyl_rbf(&env.ctx, a, &f, WeylRoute::Explicit)?;
        iso = iso.max((p.value.onb_norm()? - f.onb_norm()?).abs());
    }
    for _ in 0..200 {
        let (a, z) = (env.disk(1.0), env.disk(2.0));
        let e = weyl_rbf_at(&f, a, z, WeylRoute::Explicit);
        let d = weyl_rbf_at(&f, a, z, WeylRoute::Diagram);
        routes = routes.max((e - d).norm() / e.norm().max(1.0));
        let x = env.rng.gen_range(-2.0..2.0);
        let t = weyl_rbf_at(&f, Complex64::new(x, 0.0), z, WeylRoute::Explicit);
        translation = translation.max((t - f.eval(z - x)).norm() / t.norm().max(1.0));
    }
    let (a, b) = (env.disk(0.4 * env.gamma), env.disk(0.4 * env.gamma));
    let phase = weyl_semigroup_phase(env.gamma, a, b)?;
    for n in 0..=6 {
        let en = HoloFun::unit(env.width, Basis::RbfOnb, n, n + 1);
        let wb = weyl_rbf(&env.ctx, b, &en, WeylRoute::Explicit)?.value;
        let wab = weyl_rbf(&env.ctx, a, &wb, WeylRoute::Explicit)?.value;
        let direct = weyl_rbf(&env.ctx, a + b, &en, WeylRoute::Explicit)?.value;
        let scaled: Vec<Complex64> = direct.coeffs().iter().map(|v| v * phase).collect();
        semigroup = semigroup.max(dist(wab.coeffs(), &scaled));
    }
    let width = env.width;
    let lhs = weyl_rbf_fn(width, a, weyl_rbf_fn(width, b, |z| f.eval(z)));
    let rhs = weyl_rbf_fn(width, a + b, |z| f.eval(z));
    for _ in 0..20 {
        let z = env.disk(2.0);
        semigroup = semigroup.max((lhs(z) - phase * rhs(z)).norm() / lhs(z).norm().max(1.0));
    }
    env.record("weyl-isometry", &[("samples", 5.into())], iso, 1e-7);
    env.record("weyl-explicit-vs-diagram", &[("samples", 200.into())], routes, 1e-9);
    env.record("weyl-semigroup", &[("max_n", 6.into())], semigroup, 1e-7);
    env.record("weyl-real-translation", &[("samples", 200.into())], translation, 1e-12);
    Ok(())
}

fn fourier(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let alpha = env.width.alpha();
    let trunc = env.ctx.trunc();
    let (mut diagram, mut eigen): (f64, f64) = (0.0, 0.0);
    for n in 0..=16.min(trunc - 1) {
        let sig = L2Sig::basis(alpha, n, n + 1)?;
        diagram = diagram.max(env.ctx.fourier_diagram_residual(&sig)?);
        let en = HoloFun::unit(env.width, Basis::RbfOnb, n, n + 1);
        let q = env.ctx.fourier_rbf(&en, Route::Quadrature)?.value;
        let mut want = vec![ZERO; trunc];
        want[n] = minus_i_pow(n);
        eigen = eigen.max(dist(q.coeffs(), &want));
    }
    let f = env.rbf(12);
    let mut s = f.clone();
    for _ in 0..4 {
        s = fourier_rbf(&s)?;
    }
    let period = s.distance(&f)?;
    let a = Complex64::new(env.rng.gen_range(-1.0..1.0), 0.0);
    let direct = translation_rbf(&env.ctx, a, &f)?.value;
    let conj = translation_conjugated(&env.ctx, a, &f)?.value;
    env.record("fourier-diagram", &[("max_n", 16.into())], diagram, 1e-9);
    env.record("fourier-eigenvalues", &[("max_n", 16.into())], eigen, 1e-9);
    env.record("fourier-period-four", &[], period, 0.0);
    env.record("translation-conjugation", &[("shift", a.re.into())], direct.distance(&conj)?, 1e-7);
    Ok(())
}

fn position(env: &mut SuiteEnv) -> rbf_fock::Result<()> {
    let n = 16;
    let a = position_rbf_matrix(env.gamma, n)?;
    let x = position_matrix(n, env.width.alpha());
    let worst = (a.view((0, 0), (n - 1, n - 1)) - x.view((0, 0), (n - 1, n - 1))).amax();
    env.record("position-conjugation", &[("n", n.into())], worst, 1e-10);
    let r = position_identity_residual(env.gamma, n)?;
    env.record("position-derivative-identity", &[("n", n.into())], r, 1e-9);
    Ok(())
}

fn run_one(name: &str, f: SuiteFn, settings: &Settings, suite_idx: usize) -> Suite {
    let mut cases = Vec::new();
    for (gi, &gamma) in settings.gammas.iter().enumerate() {
        let seed = settings.seed.wrapping_mul(1_000_003).wrapping_add((suite_idx * 1000 + gi) as u64);
        let ctx = TransformContext::with_quadrature(
            gamma,
            settings.convention,
            settings.trunc,
            settings.quad_r,
            settings.quad_c,
        );
        let mut env = match ctx {
            Ok(ctx) => SuiteEnv {
                gamma,
                width: ctx.width(),
                ctx,
                rng: ChaCha8Rng::seed_from_u64(seed),
                tolerance: settings.tolerance,
                cases: Vec::new(),
            },
            Err(e) => {
                let mut p = BTreeMap::new();
                p.insert("gamma".to_string(), Value::from(gamma));
                cases.push(Case::failed(&format!("{name}-setup"), p, settings.tolerance.unwrap_or(0.0), e.to_string()));
                continue;
            }
        };
        if let Err(e) = f(&mut env) {
            let params = env.params(&[]);
            env.cases.push(Case::failed(
                &format!("{name}-error"),
                params,
                settings.tolerance.unwrap_or(0.0),
                e.to_string(),
            ));
        }
        cases.extend(env.cases);
    }
    Suite {
        name: name.to_string(),
        cases,
    }
}

/// Run the selected suites (all when `settings.suites` is empty). Suites run
/// on separate threads; the report keeps the fixed suite order.
pub fn run(settings: &Settings) -> anyhow::Result<VerificationReport> {
    let selected: Vec<(usize, &str)> = if settings.suites.is_empty() {
        SUITES.iter().copied().enumerate().collect()
    } else {
        let mut v = Vec::new();
        for s in &settings.suites {
            match SUITES.iter().position(|n| n == s) {
                Some(i) => v.push((i, SUITES[i])),
                None => anyhow::bail!("unknown suite `{s}` (expected one of {})", SUITES.join(", ")),
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    };
    let suites = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&(i, name)| {
                let f = suite_fn(name).expect("listed suite");
                scope.spawn(move || run_one(name, f, settings, i))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect::<Vec<_>>()
    });
    Ok(VerificationReport::new(Environment::from_settings(settings), suites))
}
