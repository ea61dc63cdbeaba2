use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use facmom::hypergeo::format_rational;
use facmom::{HighPrecReal, Rational};
use serde_json::{json, Map, Value};

use crate::args::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command's output: fixed columns, one map per row, and a summary.
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Map<String, Value>>,
    checks: usize,
    failures: Vec<String>,
    pub extra: Map<String, Value>,
}

fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rationals<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(rs.into_iter().map(rational).collect())
}

pub fn decimal(x: &HighPrecReal, digits: u32) -> Value {
    Value::String(x.to_decimal_string(digits as usize))
}

impl Report {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report {
            command,
            config: Map::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            checks: 0,
            failures: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) {
        self.config.insert(key.to_string(), value.into());
    }

    /// Adds a row; `verdict` is `Some` when the row counts as a check.
    pub fn push(&mut self, row: Map<String, Value>, verdict: Option<(bool, String)>) {
        debug_assert!(row.keys().all(|k| self.columns.contains(&k.as_str())), "undeclared column");
        if let Some((ok, label)) = verdict {
            self.checks += 1;
            if !ok {
                self.failures.push(label);
            }
        }
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> Value {
        let mut s = Map::new();
        s.insert("passed".into(), Value::Bool(self.passed()));
        s.insert("checks".into(), json!(self.checks));
        s.insert("failed".into(), json!(self.failures.len()));
        s.insert("failures".into(), json!(self.failures));
        for (k, v) in &self.extra {
            s.insert(k.clone(), v.clone());
        }
        Value::Object(s)
    }

    /// Numbers leave as strings so readers never round them through a float.
    pub fn to_json(&self) -> Value {
        stringify_numbers(json!({
            "command": self.command,
            "config": Value::Object(self.config.clone()),
            "rows": self.rows.iter().cloned().map(Value::Object).collect::<Vec<_>>(),
            "summary": self.summary(),
        }))
    }

    fn write_csv(&self, out: impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(self.columns.iter().map(|c| row.get(*c).map(csv_cell).unwrap_or_default()))?;
        }
        w.flush()
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> CliResult<()> {
        let io_err = |e: io::Error| CliError::Usage(format!("cannot write output: {e}"));
        let mut sink: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p).map_err(io_err)?),
            None => Box::new(io::stdout().lock()),
        };
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut sink, &self.to_json()).map_err(|e| io_err(e.into()))?;
                writeln!(sink).map_err(io_err)?;
            }
            Format::Csv => self.write_csv(&mut sink).map_err(io_err)?,
        }
        sink.flush().map_err(io_err)
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

/// Builds a row map from `(column, value)` pairs.
#[macro_export]
macro_rules! row {
    ($($k:literal => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $( m.insert($k.to_string(), serde_json::Value::from($v)); )*
        m
    }};
}

#[cfg(test)]
mod tests {
    use super::*;
    use facmom::hypergeo::rat;

    #[test]
    fn csv_quotes_and_lists() {
        let mut r = Report::new("t", &["a", "b", "c"]);
        r.push(crate::row!("a" => rational(&rat(1, 2)), "b" => "x,y", "c" => rationals(&[rat(1, 1), rat(-2, 3)])), None);
        r.push(crate::row!("a" => true), Some((false, "bad".into())));
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "a,b,c\n1/2,\"x,y\",1/1;-2/3\ntrue,,\n");
        assert!(!r.passed());
        assert_eq!(r.summary()["failed"], json!(1));
    }
}
