use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Number, Value};
use spectral_lab::Check;

/// `%.15g`: 15 significant digits, trailing zeros removed, scientific
/// notation outside `[1e-4, 1e15)`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format has an exponent");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    if !(-4..15).contains(&exponent) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exponent < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exponent.abs());
    }
    let decimals = (14 - exponent).max(0) as usize;
    trim_fraction(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn json_float(x: f64) -> Value {
    format_float(x)
        .parse::<f64>()
        .ok()
        .and_then(Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    /// An exact integer too wide for a JSON number.
    BigInt(String),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::BigInt(s) => s.clone(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => csv_escape(s),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(small) => Value::from(small),
                Err(_) => Value::String(v.to_string()),
            },
            Cell::BigInt(s) => match s.parse::<u64>() {
                Ok(small) => Value::from(small),
                Err(_) => Value::String(s.clone()),
            },
            Cell::Float(x) => json_float(*x),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// One top-level JSON object per run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Value,
    pub checks: Vec<Value>,
    pub passed: bool,
    pub seed: Option<u64>,
    pub version: &'static str,
}

impl RunReport {
    pub fn new(command: &str, parameters: BTreeMap<String, Value>, table: &Table) -> Self {
        RunReport {
            command: command.into(),
            parameters,
            outputs: table.to_json(),
            checks: Vec::new(),
            passed: true,
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn with_checks(mut self, checks: &[Check]) -> Self {
        self.passed = checks.iter().all(|c| c.passed);
        self.checks = checks
            .iter()
            .map(|c| {
                let mut obj = Map::new();
                obj.insert("name".into(), Value::String(c.name.clone()));
                obj.insert("residual".into(), json_float(c.residual));
                obj.insert("tolerance".into(), json_float(c.tolerance));
                obj.insert("passed".into(), Value::Bool(c.passed));
                Value::Object(obj)
            })
            .collect();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are serialisable");
        s.push('\n');
        s
    }
}

pub fn float_param(x: f64) -> Value {
    json_float(x)
}

/// Check table for CSV output of a verification run.
pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["name", "residual", "tolerance", "passed"]);
    for c in checks {
        t.push(vec![
            Cell::Text(c.name.clone()),
            Cell::Float(c.residual),
            Cell::Float(c.tolerance),
            Cell::Bool(c.passed),
        ]);
    }
    t
}

pub fn summary_line(suite: &str, checks: &[Check]) -> String {
    let passed = checks.iter().filter(|c| c.passed).count();
    let mut s = format!("verify {suite}: {passed}/{} checks passed", checks.len());
    for c in checks.iter().filter(|c| !c.passed) {
        let _ = write!(
            s,
            "\nFAILED {}: residual {} > tolerance {}",
            c.name,
            format_float(c.residual),
            format_float(c.tolerance)
        );
    }
    s
}
