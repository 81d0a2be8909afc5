use serde_json::{json, Map, Value};

use super::{subcommand_name, Cli};
use crate::error::Error;

pub const SCHEMA: u64 = 1;

/// A piece of table output.
#[derive(Clone, Debug)]
pub enum Block {
    Fields(Vec<(String, String)>),
    Table { title: String, headers: Vec<String>, rows: Vec<Vec<String>> },
}

/// Command result: a JSON payload and the same data laid out for terminals.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub json: Map<String, Value>,
    pub blocks: Vec<Block>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, json: Map::new(), blocks: Vec::new() }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.json.insert(key.to_string(), v.into());
    }

    pub fn fields(&mut self, rows: Vec<(&str, String)>) {
        self.blocks.push(Block::Fields(rows.into_iter().map(|(k, v)| (k.to_string(), v)).collect()));
    }

    pub fn table(&mut self, title: &str, headers: &[&str], rows: Vec<Vec<String>>) {
        self.blocks.push(Block::Table {
            title: title.to_string(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows,
        });
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        for (k, v) in &self.json {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            match b {
                Block::Fields(rows) => {
                    let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                    for (k, v) in rows {
                        out.push_str(&format!("{k:<w$}  {v}\n"));
                    }
                }
                Block::Table { title, headers, rows } => {
                    out.push_str(title);
                    out.push('\n');
                    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
                    for r in rows {
                        for (j, c) in r.iter().enumerate() {
                            if j < widths.len() {
                                widths[j] = widths[j].max(c.chars().count());
                            }
                        }
                    }
                    let line = |cells: &[String]| {
                        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                        parts.join("  ").trim_end().to_string() + "\n"
                    };
                    out.push_str(&line(headers));
                    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
                    out.push_str(&line(&rule));
                    for r in rows {
                        out.push_str(&line(r));
                    }
                }
            }
        }
        out.trim_end().to_string()
    }
}

pub fn error_json(cli: &Cli, e: &Error) -> String {
    let kind = match e {
        Error::Domain(_) => "domain",
        Error::Arithmetic(_) => "arithmetic",
        Error::FieldMismatch(..) => "field_mismatch",
        Error::Length { .. } => "length",
        Error::Degenerate(_) => "degenerate",
        Error::Parse(_) => "parse",
        Error::PrecisionExhausted(_) => "precision_exhausted",
        Error::Internal(_) => "internal",
    };
    let v = json!({
        "schema": SCHEMA,
        "command": subcommand_name(cli),
        "error": { "kind": kind, "message": e.to_string() },
    });
    serde_json::to_string_pretty(&v).expect("JSON values always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let mut r = Report::new("expand");
        r.fields(vec![("a", "1".into()), ("long key", "2".into())]);
        r.table("rows", &["n", "value"], vec![vec!["0".into(), "x".into()], vec!["10".into(), "yy".into()]]);
        let t = r.to_table();
        assert!(t.contains("a         1"));
        assert!(t.contains("n   value"));
        assert!(t.contains("10  yy"));
        let j = r.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["command"], "expand");
    }
}
