//! JSON report with a fixed top-level key order.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 10;
pub const EXIT_INDETERMINATE: i32 = 20;
pub const EXIT_ERROR: i32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub total_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub spec_hash: String,
    pub verdict: Option<String>,
    pub confidence: Option<String>,
    pub criterion: Option<String>,
    pub evidence: Value,
    pub witnesses: Vec<Value>,
    pub samples: Vec<Value>,
    pub timings: Timings,
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    /// 0 Holds, 10 Fails, 20 Indeterminate; numeric reports (no verdict) exit 0.
    pub fn exit_code(&self) -> i32 {
        match self.verdict.as_deref() {
            None | Some("Holds") => EXIT_HOLDS,
            Some("Fails") => EXIT_FAILS,
            _ => EXIT_INDETERMINATE,
        }
    }

    /// The report as JSON with `timings` removed, for byte comparisons.
    pub fn without_timings(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("timings");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn problem_text(&self) -> Result<&str> {
        match self.evidence.get("problem").and_then(Value::as_str) {
            Some(t) => Ok(t),
            None => bail!("report has no embedded problem"),
        }
    }
}
