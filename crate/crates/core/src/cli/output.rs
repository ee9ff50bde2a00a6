use std::fmt::Write as _;
use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// One command result, renderable in every format.
pub struct Report {
    pub json: Value,
    pub pretty: String,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    /// false for a verification failure (exit code 1)
    pub ok: bool,
}

impl Report {
    pub fn new(json: Value, pretty: String) -> Self {
        Report { json, pretty, table: None, ok: true }
    }

    pub fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.ok = !failed;
        self
    }

    pub fn render<W: Write>(&self, format: Format, out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Integration(format!("writing output: {e}"));
        match format {
            Format::Json => {
                let mut out = out;
                let s = serde_json::to_string_pretty(&self.json).map_err(|e| Error::Parse(e.to_string()))?;
                writeln!(out, "{s}").map_err(io)
            }
            Format::Pretty => {
                let mut out = out;
                write!(out, "{}", self.pretty).map_err(io)
            }
            Format::Csv => {
                let (header, rows) =
                    self.table.as_ref().ok_or_else(|| Error::Domain("this command has no tabular (csv) output".into()))?;
                let mut w = csv::Writer::from_writer(out);
                let ce = |e: csv::Error| Error::Integration(format!("writing csv: {e}"));
                w.write_record(header).map_err(ce)?;
                for r in rows {
                    w.write_record(r).map_err(ce)?;
                }
                w.flush().map_err(io)
            }
        }
    }
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "nan".into()
    }
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, Value::from)
}

/// Aligned text table.
pub fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(s, "{}", parts.join("  ").trim_end());
    };
    line(&mut s, header.to_vec());
    for r in rows {
        line(&mut s, r.iter().map(String::as_str).collect());
    }
    s
}
