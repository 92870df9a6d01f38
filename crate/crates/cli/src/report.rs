use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Format;

/// Everything needed to reproduce a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    /// SHA-256 of every input file, keyed by the path as given.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunManifest {
    pub fn new(command: &str, config: Value, seed: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            inputs: BTreeMap::new(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: None,
        }
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.insert(
            path.display().to_string(),
            hex::encode(Sha256::digest(bytes)),
        );
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub manifest: RunManifest,
    pub result: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report values are finite");
                s.push('\n');
                s
            }
            Format::Text => {
                let value = serde_json::to_value(self).expect("report values are finite");
                let mut out = String::new();
                flatten("", &value, &mut out);
                out
            }
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            let _ = writeln!(out, "{prefix} = [{}]", parts.join(", "));
        }
        Value::String(s) => {
            let _ = writeln!(out, "{prefix} = {s}");
        }
        other => {
            let _ = writeln!(out, "{prefix} = {other}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_format_flattens_keys() {
        let report = Report {
            manifest: RunManifest::new("accept", json!({"input": "10"}), 3),
            result: json!({"probability": 0.75, "claims": [{"pass": true}], "eig": [1.0, 2.0]}),
        };
        let text = report.render(Format::Text);
        assert!(text.contains("manifest.command = accept\n"));
        assert!(text.contains("manifest.config.input = 10\n"));
        assert!(text.contains("result.probability = 0.75\n"));
        assert!(text.contains("result.claims.0.pass = true\n"));
        assert!(text.contains("result.eig = [1.0, 2.0]\n"));
    }

    #[test]
    fn digests_are_sha256() {
        let mut m = RunManifest::new("x", Value::Null, 0);
        m.record_input(Path::new("a.txt"), b"abc");
        assert_eq!(
            m.inputs["a.txt"],
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
