use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one verification check. `passed` is `metric <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check_id: String,
    pub params: BTreeMap<String, Value>,
    pub metric: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: f64,
    /// Set when the check could not be evaluated at all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn pass_vector(&self) -> Vec<(String, bool)> {
        self.entries.iter().map(|e| (e.check_id.clone(), e.passed)).collect()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One row per check; params are flattened to `key=value` pairs joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,metric,tolerance,passed,runtime_ms,params\n");
        for e in &self.entries {
            let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(
                "{},{:e},{:e},{},{:.3},{}\n",
                quoted(&e.check_id),
                e.metric,
                e.tolerance,
                e.passed,
                e.runtime_ms,
                quoted(&params.join(";"))
            ));
        }
        out
    }
}

/// RFC 4180 field quoting.
fn quoted(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}
