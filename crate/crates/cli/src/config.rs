//! Run settings: command-line flags over an optional TOML file over defaults.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rbf_fock::Convention;
use serde::Deserialize;

pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_TRUNC: usize = 32;
pub const DEFAULT_QUAD: usize = 64;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Kernel width γ; repeat to run suites at several widths
    #[arg(long = "gamma", global = true)]
    pub gamma: Vec<f64>,
    /// Number of retained basis functions N
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Gauss-Hermite order on ℝ (the ℂ rule uses 3/4 of it per axis)
    #[arg(long, global = true)]
    pub quad: Option<usize>,
    /// Segal-Bargmann kernel convention: bargmann or unnormalized
    #[arg(long, global = true)]
    pub convention: Option<Convention>,
    /// Seed for randomly drawn test points
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Replace every per-case tolerance
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Report format for `verify`
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// TOML file with any of the settings above
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    gamma: Option<GammaList>,
    trunc: Option<usize>,
    quad: Option<usize>,
    quad_c: Option<usize>,
    convention: Option<String>,
    seed: Option<u64>,
    tolerance: Option<f64>,
    format: Option<Format>,
    suites: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GammaList {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub gammas: Vec<f64>,
    pub trunc: usize,
    pub quad_r: usize,
    pub quad_c: usize,
    pub convention: Convention,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub suites: Vec<String>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            gammas: vec![DEFAULT_GAMMA],
            trunc: DEFAULT_TRUNC,
            quad_r: DEFAULT_QUAD,
            quad_c: complex_order(DEFAULT_QUAD),
            convention: Convention::default(),
            seed: DEFAULT_SEED,
            tolerance: None,
            format: Format::default(),
            suites: Vec::new(),
        }
    }
}

fn complex_order(quad: usize) -> usize {
    (3 * quad / 4).max(8)
}

impl Settings {
    pub fn resolve(args: &CommonArgs) -> Result<Settings> {
        let file = match &args.config {
            Some(path) => load(path)?,
            None => FileConfig::default(),
        };
        let mut s = Settings::default();

        if let Some(g) = file.gamma {
            s.gammas = match g {
                GammaList::One(v) => vec![v],
                GammaList::Many(v) => v,
            };
        }
        if let Some(v) = file.trunc {
            s.trunc = v;
        }
        if let Some(v) = file.quad {
            s.quad_r = v;
            s.quad_c = complex_order(v);
        }
        if let Some(v) = file.quad_c {
            s.quad_c = v;
        }
        if let Some(v) = &file.convention {
            s.convention = v.parse().map_err(anyhow::Error::msg)?;
        }
        if let Some(v) = file.seed {
            s.seed = v;
        }
        if file.tolerance.is_some() {
            s.tolerance = file.tolerance;
        }
        if let Some(v) = file.format {
            s.format = v;
        }
        if let Some(v) = file.suites {
            s.suites = v;
        }

        if !args.gamma.is_empty() {
            s.gammas = args.gamma.clone();
        }
        if let Some(v) = args.trunc {
            s.trunc = v;
        }
        if let Some(v) = args.quad {
            s.quad_r = v;
            s.quad_c = complex_order(v);
        }
        if let Some(v) = args.convention {
            s.convention = v;
        }
        if let Some(v) = args.seed {
            s.seed = v;
        }
        if args.tolerance.is_some() {
            s.tolerance = args.tolerance;
        }
        if let Some(v) = args.format {
            s.format = v;
        }
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if self.gammas.is_empty() {
            bail!("at least one gamma is required");
        }
        if let Some(g) = self.gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            bail!("gamma must be positive and finite, got {g}");
        }
        if self.trunc == 0 {
            bail!("trunc must be at least 1");
        }
        if self.quad_r < 2 || self.quad_c < 2 {
            bail!("quadrature orders must be at least 2");
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                bail!("tolerance must be a non-negative number, got {t}");
            }
        }
        Ok(())
    }

    /// First width, for commands that use a single γ.
    pub fn gamma(&self) -> f64 {
        self.gammas[0]
    }
}

fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let s = Settings::resolve(&CommonArgs::default()).unwrap();
        assert_eq!(s, Settings::default());
        assert_eq!((s.quad_r, s.quad_c), (64, 48));
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "gamma = [0.5, 2.0]\ntrunc = 16\nseed = 9\nconvention = \"unnormalized\"\n").unwrap();
        let args = CommonArgs {
            config: Some(path.clone()),
            trunc: Some(20),
            ..Default::default()
        };
        let s = Settings::resolve(&args).unwrap();
        assert_eq!(s.gammas, vec![0.5, 2.0]);
        assert_eq!(s.trunc, 20);
        assert_eq!(s.seed, 9);
        assert_eq!(s.convention, Convention::Unnormalized);

        std::fs::write(&path, "gamma = 3.0\nbogus = 1\n").unwrap();
        assert!(Settings::resolve(&args).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        let args = CommonArgs {
            gamma: vec![-1.0],
            ..Default::default()
        };
        assert!(Settings::resolve(&args).is_err());
    }
}
