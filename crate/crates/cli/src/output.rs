use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};
use sievecalc_core::SCHEMA_VERSION;

use crate::args::Global;

/// A finished report in both renderings.
pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    /// `data` must serialize to a JSON object; its fields follow
    /// `schema_version` and `command` in the document.
    pub fn new(command: &'static str, text: String, data: impl Serialize) -> Self {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        doc.insert("command".into(), Value::from(command));
        match serde_json::to_value(data).expect("report data serializes") {
            Value::Object(fields) => doc.extend(fields),
            other => {
                doc.insert("data".into(), other);
            }
        }
        Self { text, json: Value::Object(doc) }
    }

    /// Writes the report where the global flags ask for it.
    pub fn emit(&self, g: &Global) -> std::io::Result<()> {
        let json = || {
            let mut s = serde_json::to_string_pretty(&self.json).expect("JSON value serializes");
            s.push('\n');
            s
        };
        match &g.json {
            Some(Some(path)) => {
                fs::write(path, json())?;
                write_main(g.output.as_deref(), &self.text)
            }
            Some(None) => write_main(g.output.as_deref(), &json()),
            None => write_main(g.output.as_deref(), &self.text),
        }
    }
}

fn write_main(path: Option<&Path>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

/// `x` with 18 significant digits.
pub fn sig18(x: f64) -> String {
    format!("{x:.17e}")
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
