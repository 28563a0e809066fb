use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

/// A flat table; every renderer works from this.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj: Map<String, Value> = self
                            .headers
                            .iter()
                            .zip(r)
                            .map(|(h, v)| (h.clone(), scalar(v)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_string_pretty(&rows).unwrap() + "\n"
            }
            Format::Csv => {
                let mut out = self.headers.join(",") + "\n";
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|c| csv_escape(c)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Md => {
                let mut out = format!("| {} |\n", self.headers.join(" | "));
                writeln!(out, "|{}", "---|".repeat(self.headers.len())).unwrap();
                for r in &self.rows {
                    writeln!(out, "| {} |", r.join(" | ")).unwrap();
                }
                out
            }
        }
    }
}

fn scalar(v: &str) -> Value {
    match v {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        _ => v
            .parse::<u64>()
            .map(Value::from)
            .unwrap_or_else(|_| Value::String(v.to_string())),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Key/value report rendered as a JSON object or a two-column table.
pub fn render_record(fields: &[(&str, Value)], format: Format) -> String {
    match format {
        Format::Json => {
            let obj: Map<String, Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            serde_json::to_string_pretty(&Value::Object(obj)).unwrap() + "\n"
        }
        _ => {
            let mut t = Table::new(&["field", "value"]);
            for (k, v) in fields {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                t.push(vec![k.to_string(), v]);
            }
            t.render(format)
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
