use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Index of the instance the check belongs to, absent for global checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<usize>,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    /// The check is expected to fail (for example PSD on a non-spectral disk).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expected_fail: bool,
}

impl Check {
    /// `value <= threshold`.
    pub fn at_most(instance: Option<usize>, name: &str, value: f64, threshold: f64) -> Self {
        Self { instance, name: name.into(), value, threshold, pass: value <= threshold, expected_fail: false }
    }

    /// `value >= threshold`.
    pub fn at_least(instance: Option<usize>, name: &str, value: f64, threshold: f64) -> Self {
        Self { instance, name: name.into(), value, threshold, pass: value >= threshold, expected_fail: false }
    }

    pub fn expect_fail(mut self) -> Self {
        self.expected_fail = true;
        self
    }

    /// Outcome matches expectation.
    pub fn ok(&self) -> bool {
        self.pass != self.expected_fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skip {
    pub instance: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub failed: usize,
    pub expected_failures: usize,
    pub skipped: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub seed: Option<u64>,
    pub digest: String,
    pub checks: Vec<Check>,
    pub skipped: Vec<Skip>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub stats: serde_json::Map<String, serde_json::Value>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    /// Sorts checks and skips by instance, then fills the summary.
    pub fn new(command: &str, seed: Option<u64>, digest: String, mut checks: Vec<Check>, mut skipped: Vec<Skip>) -> Self {
        checks.sort_by_key(|c| c.instance);
        skipped.sort_by_key(|s| s.instance);
        let failed = checks.iter().filter(|c| !c.ok()).count();
        let summary = Summary {
            checks: checks.len(),
            failed,
            expected_failures: checks.iter().filter(|c| c.expected_fail).count(),
            skipped: skipped.len(),
            pass: failed == 0,
        };
        Self {
            schema: SCHEMA,
            command: command.into(),
            seed,
            digest,
            checks,
            skipped,
            stats: serde_json::Map::new(),
            summary,
            wall_time_s: None,
        }
    }

    pub fn with_stat(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.stats.insert(key.into(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Largest value among checks with the given name.
    pub fn max_value(&self, name: &str) -> Option<f64> {
        self.checks.iter().filter(|c| c.name == name).map(|c| c.value).reduce(f64::max)
    }
}

/// Hex SHA-256 of the concatenated parts.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}
