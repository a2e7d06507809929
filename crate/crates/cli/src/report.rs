//! Verification report: one JSON document with stable key order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::config::Settings;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Case {
    pub id: String,
    pub params: BTreeMap<String, Value>,
    /// `null` in JSON when the check could not be evaluated.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Case {
    pub fn new(id: &str, params: BTreeMap<String, Value>, residual: f64, tolerance: f64) -> Case {
        Case {
            id: id.to_string(),
            params,
            residual,
            tolerance,
            pass: residual <= tolerance,
            error: None,
        }
    }

    pub fn failed(id: &str, params: BTreeMap<String, Value>, tolerance: f64, error: String) -> Case {
        Case {
            id: id.to_string(),
            params,
            residual: f64::NAN,
            tolerance,
            pass: false,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Suite {
    pub name: String,
    pub cases: Vec<Case>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Environment {
    pub gamma: Vec<f64>,
    pub trunc: usize,
    pub quad_r: usize,
    pub quad_c: usize,
    pub convention: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance_override: Option<f64>,
}

impl Environment {
    pub fn from_settings(s: &Settings) -> Environment {
        Environment {
            gamma: s.gammas.clone(),
            trunc: s.trunc,
            quad_r: s.quad_r,
            quad_c: s.quad_c,
            convention: s.convention.as_str().to_string(),
            seed: s.seed,
            tolerance_override: s.tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Totals {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerificationReport {
    pub version: u32,
    pub environment: Environment,
    pub suites: Vec<Suite>,
    pub totals: Totals,
}

impl VerificationReport {
    pub fn new(environment: Environment, suites: Vec<Suite>) -> Self {
        let cases = suites.iter().map(|s| s.cases.len()).sum();
        let passed = suites.iter().flat_map(|s| &s.cases).filter(|c| c.pass).count();
        VerificationReport {
            version: REPORT_VERSION,
            environment,
            suites,
            totals: Totals {
                cases,
                passed,
                failed: cases - passed,
            },
        }
    }

    pub fn all_pass(&self) -> bool {
        self.totals.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per case: `suite,id,params,residual,tolerance,pass`, with
    /// params as `key=value` pairs joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,id,params,residual,tolerance,pass\n");
        for suite in &self.suites {
            for c in &suite.cases {
                let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let _ = writeln!(
                    out,
                    "{},{},{},{:e},{:e},{}",
                    suite.name,
                    c.id,
                    params.join(";"),
                    c.residual,
                    c.tolerance,
                    c.pass
                );
            }
        }
        let _ = writeln!(
            out,
            "# cases={} passed={} failed={}",
            self.totals.cases, self.totals.passed, self.totals.failed
        );
        out
    }
}
