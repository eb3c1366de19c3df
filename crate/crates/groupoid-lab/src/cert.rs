//! Machine-readable certificates: every auditor emits one, with exact
//! rationals rendered as "p/q" strings, and a one-screen human summary.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub seed: u64,
    pub version: String,
}

impl Certificate {
    pub fn new(property: impl Into<String>, verdict: Verdict, seed: u64) -> Self {
        Certificate {
            property: property.into(),
            parameters: BTreeMap::new(),
            verdict,
            witnesses: Vec::new(),
            seed,
            version: TOOL_VERSION.to_string(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn with_rational_param(self, key: &str, value: &Rational) -> Self {
        self.with_param(key, rational::to_string(value))
    }

    pub fn with_witness(mut self, value: impl Into<Value>) -> Self {
        self.witnesses.push(value.into());
        self
    }

    pub fn with_witnesses(mut self, values: impl IntoIterator<Item = Value>) -> Self {
        self.witnesses.extend(values);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("malformed certificate: {e}")))
    }
}

/// One-screen summary: property, parameters, verdict, extremal witness.
pub fn report(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("property : {}\n", cert.property));
    let verdict = match cert.verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Vacuous => "VACUOUS (empty family)",
    };
    out.push_str(&format!("verdict  : {verdict}\n"));
    out.push_str(&format!("seed     : {}\n", cert.seed));
    out.push_str(&format!("version  : {}\n", cert.version));
    if !cert.parameters.is_empty() {
        out.push_str("scale    :");
        for (k, v) in &cert.parameters {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
    }
    match cert.witnesses.len() {
        0 => {}
        n => {
            out.push_str(&format!("witness  : {}", cert.witnesses[0]));
            if n > 1 {
                out.push_str(&format!(" (+{} more)", n - 1));
            }
            out.push('\n');
        }
    }
    out
}
