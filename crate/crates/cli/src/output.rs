//! Flat record streams and their three renderings.

use std::fmt::Write as _;

use clap::ValueEnum;

/// Output rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    /// Aligned columns, 10 significant digits.
    #[default]
    Table,
    /// Comma-separated, 17 significant digits; a header precedes each run of
    /// records with the same fields.
    Csv,
    /// One JSON object per line, 17 significant digits.
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// One row of output: a record kind plus named fields in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub kind: &'static str,
    pub fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Self {
        Record {
            kind,
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, value: impl Into<Value>) -> Self {
        self.fields.push((name.into(), value.into()));
        self
    }

    pub fn error(message: impl Into<String>) -> Self {
        Record::new("error").with("message", message.into())
    }

    pub fn warning(message: impl Into<String>) -> Self {
        Record::new("warning").with("message", message.into())
    }

    pub fn is_error(&self) -> bool {
        self.kind == "error"
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    fn same_shape(&self, other: &Record) -> bool {
        self.kind == other.kind
            && self.fields.len() == other.fields.len()
            && self.fields.iter().zip(&other.fields).all(|(a, b)| a.0 == b.0)
    }
}

/// `v` with `digits` significant digits, fixed notation for moderate
/// magnitudes and scientific otherwise.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp) as usize, v)
    } else {
        sci
    }
}

/// `v` with 17 significant digits, always in scientific notation so that
/// csv and json agree character for character.
pub fn format_machine(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format_sig(v, 17)
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Num(x) => format_machine(*x),
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::Text(s) => s.clone(),
    }
}

fn json_value(v: &Value) -> String {
    match v {
        Value::Num(x) if x.is_finite() => format_machine(*x),
        Value::Num(_) => "null".into(),
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => serde_json::to_string(s).expect("strings always serialize"),
    }
}

fn table_cell(v: &Value) -> String {
    match v {
        Value::Num(x) => format_sig(*x, 10),
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => s.clone(),
    }
}

/// Splits `records` into maximal runs of identical shape.
fn groups(records: &[Record]) -> Vec<&[Record]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=records.len() {
        if i == records.len() || !records[i].same_shape(&records[start]) {
            out.push(&records[start..i]);
            start = i;
        }
    }
    out
}

pub fn render(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in records {
                out.push_str("{\"record\":");
                out.push_str(&json_value(&Value::Text(r.kind.to_string())));
                for (name, v) in &r.fields {
                    let _ = write!(out, ",{}:{}", json_value(&Value::Text(name.clone())), json_value(v));
                }
                out.push_str("}\n");
            }
        }
        Format::Csv => {
            for g in groups(records) {
                out.push_str("record");
                for (name, _) in &g[0].fields {
                    out.push(',');
                    out.push_str(name);
                }
                out.push('\n');
                for r in g {
                    out.push_str(r.kind);
                    for (_, v) in &r.fields {
                        out.push(',');
                        out.push_str(&csv_cell(v));
                    }
                    out.push('\n');
                }
            }
        }
        Format::Table => {
            for (i, g) in groups(records).into_iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "# {}", g[0].kind);
                let header: Vec<String> = g[0].fields.iter().map(|(n, _)| n.clone()).collect();
                let rows: Vec<Vec<String>> = g
                    .iter()
                    .map(|r| r.fields.iter().map(|(_, v)| table_cell(v)).collect())
                    .collect();
                let widths: Vec<usize> = (0..header.len())
                    .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap())
                    .collect();
                for row in std::iter::once(&header).chain(&rows) {
                    let line: Vec<String> = row
                        .iter()
                        .zip(&widths)
                        .map(|(cell, w)| format!("{cell:>w$}"))
                        .collect();
                    out.push_str(line.join("  ").trim_end());
                    out.push('\n');
                }
            }
        }
    }
    out
}
