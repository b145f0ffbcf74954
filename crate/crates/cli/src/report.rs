use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One input the command read, identified by its SHA-256.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub name: String,
    pub source: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(name: &str, source: &str, bytes: &[u8]) -> Self {
        Self {
            name: name.to_string(),
            source: source.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// What every command prints on stdout. Wall time goes to stderr so equal
/// inputs give byte-identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub result: Value,
    pub exit_status: i32,
}

impl RunReport {
    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
