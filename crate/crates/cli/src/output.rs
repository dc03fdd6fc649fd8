use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::config::{RunConfig, OUTPUT_DIR_ENV};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<Option<u64>> for Cell {
    fn from(v: Option<u64>) -> Self {
        v.map_or(Cell::Missing, Cell::Int)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Significant digits kept in emitted numbers. Rounding hides last-ulp
/// differences between optimization levels.
pub const SIGNIFICANT_DIGITS: usize = 12;

fn rounded(v: f64) -> f64 {
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().unwrap_or(v)
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => json!(rounded(*v)).to_string(),
            Cell::Num(_) | Cell::Missing => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(rounded(*v)),
            Cell::Num(_) | Cell::Missing => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }
}

fn metadata_line(config: &RunConfig) -> Result<String, CliError> {
    let meta = serde_json::to_string(config).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(format!("# {meta}\n"))
}

/// CSV with a `#` metadata line, or a JSON object `{config, rows}`.
pub fn render_table(config: &RunConfig, table: &Table) -> Result<String, CliError> {
    match config.format {
        Format::Csv => {
            let mut out = metadata_line(config)?;
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let line: Vec<String> = row.iter().map(Cell::csv).collect();
                let _ = writeln!(out, "{}", line.join(","));
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let map: Map<String, Value> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), v.json()))
                        .collect();
                    Value::Object(map)
                })
                .collect();
            pretty(&json!({ "config": config, "rows": rows }))
        }
    }
}

/// Scalar bundle. CSV form is one `key,value` line per field.
pub fn render_bundle(config: &RunConfig, bundle: &impl Serialize) -> Result<String, CliError> {
    let mut value = serde_json::to_value(bundle).map_err(|e| CliError::Runtime(e.to_string()))?;
    round_numbers(&mut value);
    match config.format {
        Format::Json => pretty(&json!({ "config": config, "result": value })),
        Format::Csv => {
            let mut out = metadata_line(config)?;
            out.push_str("key,value\n");
            flatten("", &value, &mut out);
            Ok(out)
        }
    }
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = json!(rounded(x));
            }
        }
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        _ => {}
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Null => {
            let _ = writeln!(out, "{prefix},");
        }
        Value::String(s) => {
            let _ = writeln!(out, "{prefix},{s}");
        }
        other => {
            let _ = writeln!(out, "{prefix},{other}");
        }
    }
}

fn pretty(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Runtime(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `--out`, else `$OZAWA_LAB_OUTPUT_DIR/<command>.<ext>`, else stdout.
pub fn destination(config: &RunConfig) -> Option<PathBuf> {
    if let Some(p) = &config.out {
        return Some(p.clone());
    }
    std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(format!("{}.{}", config.command, config.format.extension())))
}

pub fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match destination(config) {
        Some(path) => std::fs::write(&path, text).map_err(|e| {
            CliError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
