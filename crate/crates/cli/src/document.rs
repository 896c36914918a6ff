use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

/// Machine-readable record of one command run on one input file.
///
/// Everything but `timings` is a function of the input bytes and the
/// parameters. Big integers are decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub format: u32,
    pub command: String,
    pub input: InputDigest,
    pub parameters: BTreeMap<String, Value>,
    /// Present when the command succeeded.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub exit_code: i32,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    /// Hex SHA-256 of the file bytes; empty if the file could not be read.
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}
