use std::io::Write;

use serde_json::{json, Value};

use crate::Format;

/// A finished run: the effective configuration, the full result for JSON,
/// and a flat table for CSV and text.
pub struct Report {
    pub config: Value,
    pub result: Value,
    pub summary: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Shortest round-trip form, switching to exponent notation far from 1.
pub fn num(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e15) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = json!({ "config": self.config, "result": self.result });
                serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
            }
            Format::Csv => {
                let mut s = self.header.join(",") + "\n";
                for row in &self.rows {
                    s += &row.join(",");
                    s.push('\n');
                }
                s
            }
            Format::Text => {
                let mut s = String::from("config:\n");
                if let Value::Object(map) = &self.config {
                    for (k, v) in map {
                        s += &format!("  {k} = {v}\n");
                    }
                }
                for (k, v) in &self.summary {
                    s += &format!("{k}: {v}\n");
                }
                if !self.rows.is_empty() {
                    s += &format!("\n{}\n", self.header.join("\t"));
                    for row in &self.rows {
                        s += &row.join("\t");
                        s.push('\n');
                    }
                }
                s
            }
        }
    }

    /// CSV has no room for the configuration, so it is echoed to stderr.
    pub fn emit(&self, format: Format, out: Option<&std::path::Path>) -> std::io::Result<()> {
        if format == Format::Csv {
            eprintln!("# config {}", self.config);
        }
        let text = self.render(format);
        match out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}
