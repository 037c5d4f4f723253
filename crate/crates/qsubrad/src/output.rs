//! Tabular results and their CSV / JSON encodings.
//!
//! CSV layout: `# key=value` metadata lines, one header row, then one row per
//! sample. Every number is printed with a fixed count of significant digits,
//! so output is byte-stable for a given configuration and version.

use serde_json::{json, Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// `%g`-style rendering with `digits` significant digits.
pub fn format_number(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds a value to what the CSV encodes at `digits`.
pub fn rounded(x: f64, digits: usize) -> f64 {
    format_number(x, digits).parse().unwrap_or(x)
}

pub fn to_csv(table: &Table, digits: usize) -> String {
    let mut out = String::new();
    for (k, v) in &table.metadata {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x, digits)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn json_number(x: f64, digits: usize) -> Value {
    let r = rounded(x, digits);
    serde_json::Number::from_f64(r).map_or_else(|| Value::String(format_number(x, digits)), Value::Number)
}

pub fn to_json(table: &Table, digits: usize) -> String {
    let metadata: Map<String, Value> = table
        .metadata
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| Value::Array(r.iter().map(|&x| json_number(x, digits)).collect()))
        .collect();
    let doc = json!({
        "metadata": metadata,
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn render(table: &Table, format: Format, digits: usize) -> String {
    match format {
        Format::Csv => to_csv(table, digits),
        Format::Json => to_json(table, digits),
    }
}

/// Parses CSV written by [`to_csv`] back into a table.
pub fn parse_csv(text: &str) -> Option<Table> {
    let mut metadata = Vec::new();
    let mut lines = text.lines();
    let header = loop {
        let line = lines.next()?;
        match line.strip_prefix("# ") {
            Some(meta) => {
                let (k, v) = meta.split_once('=')?;
                metadata.push((k.to_string(), v.to_string()));
            }
            None => break line,
        }
    };
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for line in lines {
        let row: Option<Vec<f64>> = line.split(',').map(|c| c.parse().ok()).collect();
        let row = row?;
        if row.len() != columns.len() {
            return None;
        }
        rows.push(row);
    }
    Some(Table { metadata, columns, rows })
}
