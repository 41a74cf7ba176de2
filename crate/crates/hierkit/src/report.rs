//! Run reports: one deterministic document per solver invocation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Report printed on standard output. Everything here is a pure
/// function of (instance bytes, parameters, seed); timing diagnostics
/// go to standard error instead so identical runs stay byte-identical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub instance_digest: String,
    pub parameters: BTreeMap<String, String>,
    pub output: Value,
}

impl RunReport {
    pub fn new(command: &str, instance_bytes: &[u8]) -> RunReport {
        let mut hasher = Sha256::new();
        hasher.update(instance_bytes);
        let digest = hasher.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        RunReport {
            command: command.to_string(),
            instance_digest: format!("sha256:{hex}"),
            parameters: BTreeMap::new(),
            output: Value::Null,
        }
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    /// Flat `path: value` rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("instance: {}\n", self.instance_digest));
        for (k, v) in &self.parameters {
            out.push_str(&format!("param {k}: {v}\n"));
        }
        render_value("result", &self.output, &mut out);
        out
    }
}

fn render_value(path: &str, value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str(&format!("{path}: null\n")),
        Value::Bool(b) => out.push_str(&format!("{path}: {b}\n")),
        Value::Number(n) => out.push_str(&format!("{path}: {n}\n")),
        Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
        Value::Array(items) => {
            if items.iter().all(|v| v.is_string() || v.is_number()) {
                let flat: Vec<String> = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                out.push_str(&format!("{path}: [{}]\n", flat.join(", ")));
            } else {
                for (i, item) in items.iter().enumerate() {
                    render_value(&format!("{path}[{i}]"), item, out);
                }
            }
        }
        Value::Object(map) => {
            for (k, v) in map {
                render_value(&format!("{path}.{k}"), v, out);
            }
        }
    }
}
