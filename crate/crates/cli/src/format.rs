//! Locale-free rendering of flat records as CSV, JSON or an aligned table.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

pub const UNDEFINED: &str = "undefined";

/// Formats `x` with 12 significant digits, like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { "-" } else { "+" };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_else(|| UNDEFINED.into())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(u64),
    Num(Option<f64>),
    Text(String),
    Bool(bool),
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Num(v) => fmt_opt(*v),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => Value::from(*v),
            Field::Num(Some(v)) if v.is_finite() => {
                let rounded = f64::from_str(&fmt_num(*v)).expect("formatted number parses");
                Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
            }
            Field::Num(_) => Value::String(UNDEFINED.into()),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(Some(v))
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        Field::Num(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

/// Ordered, one-level list of named fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, value: impl Into<Field>) -> &mut Self {
        self.fields.push((name.into(), value.into()));
        self
    }

    /// Two-column CSV, one field per line.
    pub fn render_key_value(&self, key: &str, value: &str) -> String {
        let mut out = format!("{key},{value}\n");
        for (n, v) in &self.fields {
            let _ = writeln!(out, "{},{}", csv_cell(n), csv_cell(&v.text()));
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let names: Vec<&str> = self.fields.iter().map(|(n, _)| n.as_str()).collect();
                let values: Vec<String> = self.fields.iter().map(|(_, v)| csv_cell(&v.text())).collect();
                format!("{}\n{}\n", names.join(","), values.join(","))
            }
            OutputFormat::Json => {
                let map: Map<String, Value> = self.fields.iter().map(|(n, v)| (n.clone(), v.json())).collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json");
                s.push('\n');
                s
            }
            OutputFormat::Table => {
                let width = self.fields.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
                let mut out = String::new();
                for (n, v) in &self.fields {
                    let _ = writeln!(out, "{n:<width$}  {}", v.text());
                }
                out
            }
        }
    }
}

pub fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}
