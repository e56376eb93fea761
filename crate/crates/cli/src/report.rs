//! Machine-readable reports: a header echoed in every output plus one record per result.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// How a number was obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    ClosedForm,
    Bruteforce,
    Quadrature(f64),
}

impl Serialize for Provenance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Provenance::ClosedForm => s.serialize_str("closed_form"),
            Provenance::Bruteforce => s.serialize_str("bruteforce"),
            Provenance::Quadrature(tol) => s.serialize_str(&format!("quadrature({tol:e})")),
        }
    }
}

/// A reported number. Exact integers and rationals are carried as strings.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Num {
    Exact { exact: String, provenance: Provenance },
    Complex { re: f64, im: f64, provenance: Provenance },
}

impl Num {
    pub fn exact(v: impl ToString, provenance: Provenance) -> Self {
        Num::Exact { exact: v.to_string(), provenance }
    }

    pub fn complex(z: Complex64, provenance: Provenance) -> Self {
        Num::Complex { re: z.re, im: z.im, provenance }
    }

    pub fn real(x: f64, provenance: Provenance) -> Self {
        Num::Complex { re: x, im: 0.0, provenance }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Partial,
    InvariantFailure,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub volume_normalization: f64,
    pub status: Status,
    pub parameters: Value,
    pub records: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
}

impl Report {
    pub fn new(command: &str, parameters: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            volume_normalization: 1.0,
            status: Status::Ok,
            parameters,
            records: Vec::new(),
            summary: None,
        }
    }

    pub fn push(&mut self, record: impl Serialize) {
        self.records.push(serde_json::to_value(record).expect("records serialize"));
    }

    /// Worst status wins.
    pub fn mark(&mut self, s: Status) {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Partial => 1,
            Status::InvariantFailure => 2,
        };
        if rank(s) > rank(self.status) {
            self.status = s;
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Partial => 3,
            Status::InvariantFailure => 4,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> Result<String, CliError> {
        let mut out = Vec::new();
        writeln!(out, "# schema_version={}", self.schema_version)?;
        writeln!(out, "# command={}", self.command)?;
        writeln!(out, "# volume_normalization={}", self.volume_normalization)?;
        writeln!(out, "# status={}", serde_json::to_value(self.status)?.as_str().unwrap_or(""))?;
        let rows: Vec<Vec<(String, String)>> = self.records.iter().map(flatten).collect();
        let mut header: Vec<String> = Vec::new();
        for row in &rows {
            for (k, _) in row {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&header)?;
            for row in &rows {
                let line: Vec<&str> =
                    header.iter().map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| v.as_str()).unwrap_or("")).collect();
                w.write_record(&line)?;
            }
            w.flush()?;
        }
        Ok(String::from_utf8(out).expect("csv output is utf-8"))
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format)?;
        match out {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

/// Nested objects become dotted column names; arrays are kept as JSON text.
fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(&key, x, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Null => out.push((prefix.to_string(), String::new())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    match v {
        Value::Object(_) => go("", v, &mut out),
        other => go("value", other, &mut out),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_strings() {
        assert_eq!(serde_json::to_value(Provenance::ClosedForm).unwrap(), "closed_form");
        assert_eq!(serde_json::to_value(Provenance::Quadrature(1e-9)).unwrap(), "quadrature(1e-9)");
    }

    #[test]
    fn csv_flattens_and_unions_columns() {
        let mut r = Report::new("t", Value::Null);
        r.push(serde_json::json!({ "a": 1, "n": Num::exact(25, Provenance::ClosedForm) }));
        r.push(serde_json::json!({ "b": "x" }));
        let text = r.render(Format::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[2], "# volume_normalization=1");
        assert_eq!(lines[4], "a,n.exact,n.provenance,b");
        assert_eq!(lines[5], "1,25,closed_form,");
        assert_eq!(lines[6], ",,,x");
    }

    #[test]
    fn worst_status_wins() {
        let mut r = Report::new("t", Value::Null);
        r.mark(Status::InvariantFailure);
        r.mark(Status::Partial);
        assert_eq!(r.exit_code(), 4);
    }
}
