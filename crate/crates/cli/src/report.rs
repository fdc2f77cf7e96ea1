//! Machine-readable reports.

use serde::Serialize;
use serde_json::Value;
use umtl_core::U2Parse;

use crate::corpus::sha256_hex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// One command run. `digest` covers every field except itself and
/// `timings`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub u2_parse: U2Parse,
    pub inputs: Vec<InputDigest>,
    pub exit_code: i32,
    pub result: Value,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl ReportDocument {
    pub fn new(command: &str, u2_parse: U2Parse, inputs: Vec<InputDigest>, exit_code: i32, result: Value) -> Self {
        let mut doc = ReportDocument {
            tool: "umtl",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            u2_parse,
            inputs,
            exit_code,
            result,
            digest: String::new(),
            timings: None,
        };
        doc.digest = sha256_hex(doc.to_json().as_bytes());
        doc
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
