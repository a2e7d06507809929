//! Subcommands.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};

use rbf_fock::hermite::{fourier_l2, hermite_fns, L2Sig};
use rbf_fock::kernels::{fock_kernel, gram, mercer_partial, rbf_kernel, rbf_sb_kernel, sb_kernel};
use rbf_fock::spaces::{Basis, HoloFun};
use rbf_fock::transforms::{fourier_rbf, RbfRoute, Route, TransformContext};
use rbf_fock::{Complex64, Warning};

use crate::config::{CommonArgs, Format, Settings};
use crate::io::{self, Signal};
use crate::suites;

#[derive(Debug, Parser)]
#[command(name = "rbf-fock", version, about = "Gaussian RBF and Fock space numerics: verification, kernels, transforms")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suites and emit a report
    Verify {
        /// Run only this suite (repeatable)
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// Evaluate a kernel on all ordered pairs of points
    Kernel {
        #[arg(long, value_enum, default_value = "rbf")]
        kind: KernelKind,
        /// CSV with header `re,im`
        #[arg(long)]
        points: PathBuf,
        /// Append the minimum eigenvalue of the RBF Gram matrix
        #[arg(long)]
        gram: bool,
        /// Number of series terms for `mercer` (defaults to --trunc)
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Apply a transform to a signal or coefficient file
    Transform {
        #[arg(long, value_enum)]
        direction: Direction,
        /// CSV with header `x,re,im` (samples) or `n,re,im` (coefficients)
        #[arg(long)]
        signal: PathBuf,
        /// Emit samples on `start:end:count` instead of coefficients (inverse only)
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Tabulate basis functions on a real grid
    Basis {
        #[arg(long, value_enum, default_value = "rbf")]
        kind: BasisKind,
        /// Highest index (defaults to --trunc minus one)
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value = "-3:3:61", allow_hyphen_values = true)]
        grid: String,
    },
    /// Partial Mercer sums against the exact kernel
    Mercer {
        /// First point as `re,im`
        #[arg(long, default_value = "0.5,0.5", allow_hyphen_values = true)]
        z: String,
        /// Second point as `re,im`
        #[arg(long, default_value = "0.5,-0.5", allow_hyphen_values = true)]
        w: String,
        /// Largest number of terms (defaults to --trunc)
        #[arg(long)]
        max_terms: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Rbf,
    Fock,
    Sb,
    RbfSb,
    Mercer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    Rbf,
    Fock,
    Hermite,
}

/// Text to emit and whether the run counts as a success.
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, success: true }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut settings = Settings::resolve(&cli.common)?;
    if !matches!(cli.command, Command::Verify { .. }) && cli.common.format == Some(Format::Json) {
        bail!("--format json is only supported by verify; other commands emit CSV");
    }
    match &cli.command {
        Command::Verify { suites: names } => {
            if !names.is_empty() {
                settings.suites = names.clone();
            }
            let report = suites::run(&settings)?;
            let text = match settings.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            Ok(Outcome {
                text,
                success: report.all_pass(),
            })
        }
        Command::Kernel {
            kind,
            points,
            gram: with_gram,
            terms,
        } => kernel(&settings, *kind, &io::parse_points(&io::read(points)?)?, *with_gram, *terms).map(Outcome::ok),
        Command::Transform { direction, signal, grid } => {
            let grid = grid.as_deref().map(io::parse_grid).transpose()?;
            transform(&settings, *direction, io::parse_signal(&io::read(signal)?)?, grid).map(Outcome::ok)
        }
        Command::Basis { kind, max_n, grid } => {
            let max_n = max_n.unwrap_or(settings.trunc - 1);
            basis(&settings, *kind, max_n, &io::parse_grid(grid)?).map(Outcome::ok)
        }
        Command::Mercer { z, w, max_terms } => mercer(
            &settings,
            io::parse_complex(z)?,
            io::parse_complex(w)?,
            max_terms.unwrap_or(settings.trunc),
        )
        .map(Outcome::ok),
    }
}

pub fn kernel(
    settings: &Settings,
    kind: KernelKind,
    points: &[Complex64],
    with_gram: bool,
    terms: Option<usize>,
) -> Result<String> {
    let gamma = settings.gamma();
    let alpha = 2.0 / (gamma * gamma);
    let terms = terms.unwrap_or(settings.trunc);
    let mut out = String::from("z_re,z_im,w_re,w_im,re,im\n");
    for &z in points {
        for &w in points {
            let v = match kind {
                KernelKind::Rbf => rbf_kernel(gamma, z, w),
                KernelKind::Fock => fock_kernel(alpha, z, w),
                KernelKind::Sb | KernelKind::RbfSb => {
                    if w.im != 0.0 {
                        bail!("{kind:?} kernels take a real second argument; point {w} is not real");
                    }
                    if kind == KernelKind::Sb {
                        sb_kernel(alpha, z, w.re, settings.convention)
                    } else {
                        rbf_sb_kernel(gamma, z, w.re, settings.convention)
                    }
                }
                KernelKind::Mercer => mercer_partial(gamma, z, w, terms)?,
            };
            let _ = writeln!(out, "{},{},{},{},{},{}", z.re, z.im, w.re, w.im, v.re, v.im);
        }
    }
    if with_gram {
        let g = gram(gamma, points, None)?;
        let _ = writeln!(out, "# min_eigenvalue={}", g.min_eigenvalue);
        let _ = writeln!(out, "# max_eigenvalue={}", g.max_eigenvalue);
        let _ = writeln!(out, "# numerical_rank={}", g.numerical_rank);
    }
    Ok(out)
}

/// Least-squares Hermite coefficients of samples; returns the signal and
/// the RMS fit residual.
fn fit(samples: &[(f64, Complex64)], alpha: f64, n: usize) -> Result<(L2Sig, f64)> {
    let n = n.min(samples.len());
    let m = samples.len();
    let psi = DMatrix::from_fn(m, n, |i, j| hermite_fns(n - 1, alpha, samples[i].0)[j]);
    let svd = psi.clone().svd(true, true);
    let solve = |rhs: DVector<f64>| -> Result<DVector<f64>> {
        svd.solve(&rhs, 1e-12).map_err(|e| anyhow::anyhow!("least-squares fit failed: {e}"))
    };
    let re = solve(DVector::from_iterator(m, samples.iter().map(|s| s.1.re)))?;
    let im = solve(DVector::from_iterator(m, samples.iter().map(|s| s.1.im)))?;
    let fitted_re = &psi * &re;
    let fitted_im = &psi * &im;
    let rms = (samples
        .iter()
        .enumerate()
        .map(|(i, s)| (Complex64::new(fitted_re[i], fitted_im[i]) - s.1).norm_sqr())
        .sum::<f64>()
        / m as f64)
        .sqrt();
    let coeffs = re.iter().zip(im.iter()).map(|(a, b)| Complex64::new(*a, *b)).collect();
    Ok((L2Sig::new(alpha, coeffs)?, rms))
}

fn warnings(out: &mut String, tail: f64, warnings: &[Warning]) {
    let _ = writeln!(out, "# tail={tail}");
    for w in warnings {
        match w {
            Warning::Truncation { tail } => {
                let _ = writeln!(out, "# warning: truncation tail {tail} exceeds threshold");
            }
            Warning::ConventionOffset { factor } => {
                let _ = writeln!(out, "# warning: unnormalized convention scales the result by {factor}");
            }
        }
    }
}

pub fn transform(settings: &Settings, direction: Direction, signal: Signal, grid: Option<Vec<f64>>) -> Result<String> {
    let ctx = TransformContext::with_quadrature(
        settings.gamma(),
        settings.convention,
        settings.trunc,
        settings.quad_r,
        settings.quad_c,
    )?;
    let alpha = ctx.width().alpha();
    let mut out = String::new();
    if grid.is_some() && direction != Direction::Inverse {
        bail!("--grid applies to the inverse direction only");
    }
    match (direction, signal) {
        (Direction::Forward, signal) => {
            let sig = match signal {
                Signal::Samples(s) => {
                    let (sig, rms) = fit(&s, alpha, settings.trunc)?;
                    let _ = writeln!(out, "# fit_rms={rms}");
                    sig
                }
                Signal::Coeffs(c) => L2Sig::new(alpha, c)?,
            };
            let p = ctx.rbf_bargmann(&sig, RbfRoute::Coefficient)?;
            warnings(&mut out, sig.tail(), &p.warnings);
            io::write_coeffs(&mut out, p.value.coeffs());
        }
        (Direction::Inverse, Signal::Coeffs(c)) => {
            let f = HoloFun::new(ctx.width(), Basis::RbfOnb, c)?;
            let p = ctx.rbf_bargmann_inverse(&f, Route::Quadrature)?;
            warnings(&mut out, p.tail, &p.warnings);
            match grid {
                Some(xs) => {
                    let samples: Vec<(f64, Complex64)> = xs.iter().map(|&x| (x, p.value.value(x))).collect();
                    io::write_samples(&mut out, &samples);
                }
                None => io::write_coeffs(&mut out, p.value.coeffs()),
            }
        }
        (Direction::Inverse, Signal::Samples(_)) => {
            bail!("inverse expects RBF-space coefficients with header `n,re,im`")
        }
        (Direction::Fourier, Signal::Coeffs(c)) => {
            let f = HoloFun::new(ctx.width(), Basis::RbfOnb, c)?;
            let _ = writeln!(out, "# tail=0");
            io::write_coeffs(&mut out, fourier_rbf(&f)?.coeffs());
        }
        (Direction::Fourier, Signal::Samples(s)) => {
            let (sig, rms) = fit(&s, alpha, settings.trunc)?;
            let _ = writeln!(out, "# fit_rms={rms}");
            let _ = writeln!(out, "# tail={}", sig.tail());
            let ft = fourier_l2(&sig);
            let samples: Vec<(f64, Complex64)> = s.iter().map(|&(x, _)| (x, ft.synthesize(x))).collect();
            io::write_samples(&mut out, &samples);
        }
    }
    Ok(out)
}

pub fn basis(settings: &Settings, kind: BasisKind, max_n: usize, grid: &[f64]) -> Result<String> {
    let gamma = settings.gamma();
    let width = rbf_fock::Width::new(gamma)?;
    let alpha = width.alpha();
    let prefix = match kind {
        BasisKind::Rbf => "e",
        BasisKind::Fock => "u",
        BasisKind::Hermite => "psi",
    };
    let mut out = String::from("x");
    for n in 0..=max_n {
        let _ = write!(out, ",{prefix}_{n}");
    }
    out.push('\n');
    for &x in grid {
        let values: Vec<f64> = match kind {
            BasisKind::Hermite => hermite_fns(max_n, alpha, x),
            BasisKind::Rbf | BasisKind::Fock => {
                let b = if kind == BasisKind::Rbf { Basis::RbfOnb } else { Basis::FockOnb };
                (0..=max_n)
                    .map(|n| HoloFun::unit(width, b, n, n + 1).eval(Complex64::new(x, 0.0)).re)
                    .collect()
            }
        };
        let _ = write!(out, "{x}");
        for v in values {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn mercer(settings: &Settings, z: Complex64, w: Complex64, max_terms: usize) -> Result<String> {
    let gamma = settings.gamma();
    let exact = rbf_kernel(gamma, z, w);
    let mut out = String::new();
    let _ = writeln!(out, "# kernel={},{}", exact.re, exact.im);
    out.push_str("terms,re,im,abs_error\n");
    for n in 1..=max_terms {
        let v = mercer_partial(gamma, z, w, n)?;
        let _ = writeln!(out, "{n},{},{},{}", v.re, v.im, (v - exact).norm());
    }
    Ok(out)
}
