use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Machine-readable result of one command.
///
/// Wall time is left out unless asked for, so that identical inputs give
/// byte-identical reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub outputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// SHA-256 over the command echo and the raw config text, if any.
pub fn inputs_digest(command: &[String], config_text: Option<&str>) -> String {
    let mut h = Sha256::new();
    for arg in command {
        h.update(arg.as_bytes());
        h.update([0u8]);
    }
    if let Some(text) = config_text {
        h.update(b"config\0");
        h.update(text.as_bytes());
    }
    hex::encode(h.finalize())
}
