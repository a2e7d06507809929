//! CSV formats: `re,im` point lists, `x,re,im` samples and `n,re,im`
//! coefficients. Lines starting with `#` are diagnostics.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use rbf_fock::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    Samples(Vec<(f64, Complex64)>),
    Coeffs(Vec<Complex64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Header {
    Samples,
    Coeffs,
    Points,
}

fn header_kind(fields: &[&str]) -> Option<Header> {
    match fields {
        ["x", "re", "im"] => Some(Header::Samples),
        ["n", "re", "im"] => Some(Header::Coeffs),
        ["re", "im"] => Some(Header::Points),
        _ => None,
    }
}

/// Fields of one data row with its 1-based line number.
type Row = (u64, Vec<String>);

/// Data rows after the header.
fn rows(text: &str) -> Result<(Header, Vec<Row>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut header = None;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| anyhow!("malformed CSV: {e}"))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let fields: Vec<&str> = rec.iter().collect();
        match (header, header_kind(&fields)) {
            (None, Some(h)) => header = Some(h),
            (None, None) => bail!(
                "line {line}: expected a header `x,re,im`, `n,re,im` or `re,im`, found `{}`",
                fields.join(",")
            ),
            (Some(_), Some(_)) => bail!("line {line}: second header `{}` (mixed header types)", fields.join(",")),
            (Some(h), None) => {
                let want = if h == Header::Points { 2 } else { 3 };
                if fields.len() != want {
                    bail!("line {line}: expected {want} fields, found {}", fields.len());
                }
                out.push((line, fields.iter().map(|s| s.to_string()).collect()));
            }
        }
    }
    let header = header.ok_or_else(|| anyhow!("empty input: no header"))?;
    Ok((header, out))
}

fn num(line: u64, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| anyhow!("line {line}: `{s}` is not a number"))?;
    if !v.is_finite() {
        bail!("line {line}: `{s}` is not finite");
    }
    Ok(v)
}

pub fn parse_signal(text: &str) -> Result<Signal> {
    let (header, rows) = rows(text)?;
    match header {
        Header::Samples => {
            let samples = rows
                .iter()
                .map(|(l, f)| Ok((num(*l, &f[0])?, Complex64::new(num(*l, &f[1])?, num(*l, &f[2])?))))
                .collect::<Result<Vec<_>>>()?;
            if samples.is_empty() {
                bail!("no samples");
            }
            Ok(Signal::Samples(samples))
        }
        Header::Coeffs => {
            let mut coeffs: Vec<Option<Complex64>> = Vec::new();
            for (l, f) in &rows {
                let n: usize = f[0]
                    .parse()
                    .map_err(|_| anyhow!("line {l}: index `{}` is not a non-negative integer", f[0]))?;
                if n >= coeffs.len() {
                    coeffs.resize(n + 1, None);
                }
                if coeffs[n].is_some() {
                    bail!("line {l}: duplicate coefficient index {n}");
                }
                coeffs[n] = Some(Complex64::new(num(*l, &f[1])?, num(*l, &f[2])?));
            }
            if coeffs.is_empty() {
                bail!("no coefficients");
            }
            Ok(Signal::Coeffs(coeffs.into_iter().map(|c| c.unwrap_or_default()).collect()))
        }
        Header::Points => bail!("expected a signal (`x,re,im` or `n,re,im`), found a point list"),
    }
}

pub fn parse_points(text: &str) -> Result<Vec<Complex64>> {
    let (header, rows) = rows(text)?;
    if header != Header::Points {
        bail!("expected a point list with header `re,im`");
    }
    rows.iter()
        .map(|(l, f)| Ok(Complex64::new(num(*l, &f[0])?, num(*l, &f[1])?)))
        .collect()
}

pub fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `a:b:n` → `n` equally spaced points from `a` to `b` inclusive.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        bail!("grid must be `start:end:count`, got `{s}`");
    };
    let a: f64 = a.trim().parse().with_context(|| format!("grid start `{a}`"))?;
    let b: f64 = b.trim().parse().with_context(|| format!("grid end `{b}`"))?;
    let n: usize = n.trim().parse().with_context(|| format!("grid count `{n}`"))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        bail!("grid `{s}` is empty or not finite");
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

/// `re,im` → complex number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re.trim().parse().with_context(|| format!("real part `{re}`"))?;
    let im: f64 = im.trim().parse().with_context(|| format!("imaginary part `{im}`"))?;
    Ok(Complex64::new(re, im))
}

pub fn write_coeffs(out: &mut String, coeffs: &[Complex64]) {
    out.push_str("n,re,im\n");
    for (n, c) in coeffs.iter().enumerate() {
        let _ = writeln!(out, "{n},{},{}", c.re, c.im);
    }
}

pub fn write_samples(out: &mut String, samples: &[(f64, Complex64)]) {
    out.push_str("x,re,im\n");
    for (x, v) in samples {
        let _ = writeln!(out, "{x},{},{}", v.re, v.im);
    }
}
