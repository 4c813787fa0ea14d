use hp_core::Complex64;
use serde_json::{Map, Number, Value};

use crate::config::Format;

/// 17 significant digits with a signed exponent (`1.5000000000000000e+0`),
/// enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

/// JSON number carrying exactly the [`fmt_f64`] digits; non-finite → null.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    Value::Number(
        fmt_f64(v)
            .parse::<Number>()
            .expect("formatted float is valid JSON"),
    )
}

pub fn complex(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// One suite's outcome: an ordered JSON body and a plot-ready table.
#[derive(Debug, Clone)]
pub struct Report {
    pub suite: &'static str,
    pub pass: bool,
    pub body: Map<String, Value>,
    pub table: Table,
}

impl Report {
    pub fn to_json(&self, header: &Map<String, Value>) -> Value {
        let mut m = Map::new();
        m.insert("suite".into(), Value::String(self.suite.into()));
        for (k, v) in header {
            m.insert(k.clone(), v.clone());
        }
        for (k, v) in &self.body {
            m.insert(k.clone(), v.clone());
        }
        m.insert("pass".into(), Value::Bool(self.pass));
        Value::Object(m)
    }

    pub fn render(&self, format: Format, header: &Map<String, Value>) -> String {
        match format {
            Format::Csv => self.table.render(),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.to_json(header)).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}
