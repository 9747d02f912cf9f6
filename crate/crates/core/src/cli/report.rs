//! Reports: an ordered JSON object plus a plain-text rendering.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// Builder for a command report; key order is insertion order.
#[derive(Clone, Debug, Default)]
pub struct Report {
    header: Map<String, Value>,
    results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, arguments: Value, inputs: &Value) -> Self {
        let mut header = Map::new();
        header.insert("command".into(), Value::from(command));
        header.insert("arguments".into(), arguments);
        header.insert("inputs_sha256".into(), Value::from(digest(inputs)));
        Self { header, results: Map::new() }
    }

    /// Adds a header field such as the seed or the modulus.
    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.header.insert(key.into(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), value.into());
        self
    }

    pub fn results(&self) -> &Map<String, Value> {
        &self.results
    }

    pub fn to_value(&self, elapsed_ms: u128) -> Value {
        let mut out = self.header.clone();
        out.insert("results".into(), Value::Object(self.results.clone()));
        out.insert("elapsed_ms".into(), Value::from(elapsed_ms as u64));
        Value::Object(out)
    }

    pub fn render_structured(&self, elapsed_ms: u128) -> String {
        serde_json::to_string_pretty(&self.to_value(elapsed_ms)).expect("json values serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.results {
            render_entry(&mut out, key, value, 0);
        }
        out
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            items.iter().map(scalar).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn render_entry(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                render_entry(out, k, v, depth + 1);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_array() || v.is_object()) || items.len() > 16 => {
            out.push_str(&format!("{pad}{key}: ({} entries)\n", items.len()));
            for item in items {
                match item {
                    Value::Object(map) => {
                        let line = map.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(" ");
                        out.push_str(&format!("{pad}  {line}\n"));
                    }
                    other => out.push_str(&format!("{pad}  {}\n", scalar(other))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
    }
}

/// SHA-256 of the compact JSON encoding.
pub fn digest(value: &Value) -> String {
    hex::encode(Sha256::digest(value.to_string().as_bytes()))
}
