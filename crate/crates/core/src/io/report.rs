//! JSON run reports.
//!
//! A report is `{"format", "generated_utc", "body"}`. Everything that is a
//! function of the inputs lives in `body`, so two runs on the same inputs
//! produce identical bodies even when their timestamps differ.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const REPORT_FORMAT: &str = "autoconv-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub generated_utc: String,
    pub body: serde_json::Value,
}

impl Report {
    pub fn new(generated_utc: impl Into<String>, body: serde_json::Value) -> Self {
        Self { format: REPORT_FORMAT.to_string(), generated_utc: generated_utc.into(), body }
    }

    /// Canonical serialization of the body (keys sorted).
    pub fn body_text(&self) -> String {
        serde_json::to_string(&self.body).expect("JSON values always serialize")
    }

    /// Hex SHA-256 of [`Self::body_text`].
    pub fn body_digest(&self) -> String {
        hex::encode(Sha256::digest(self.body_text().as_bytes()))
    }

    pub fn to_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_pretty()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn body_is_independent_of_timestamp() {
        let a = Report::new("2026-01-01T00:00:00Z", json!({"b": 1.5, "a": [1, 2]}));
        let b = Report::new("2027-06-01T12:00:00Z", json!({"a": [1, 2], "b": 1.5}));
        assert_eq!(a.body_text(), b.body_text());
        assert_eq!(a.body_digest(), b.body_digest());
        assert_ne!(a.to_pretty().unwrap(), b.to_pretty().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let a = Report::new("t", json!({"x": 0.1 + 0.2}));
        let back: Report = serde_json::from_str(&a.to_pretty().unwrap()).unwrap();
        assert_eq!(back, a);
    }
}
