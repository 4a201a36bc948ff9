//! Column-oriented numeric tables with CSV and JSON serialization.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{Map, Value};
use thiserror::Error;

/// Significant digits kept by [`round_sig`] and the CSV writer.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("row {row} has {got} values, expected {expected}")]
    Arity {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("malformed metadata line {0:?}")]
    Metadata(String),
    #[error("invalid number {0:?}")]
    Number(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Round to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn format_value(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:?}", round_sig(x))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
}

impl CurveTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), TableError> {
        if row.len() != self.columns.len() {
            return Err(TableError::Arity {
                row: self.rows.len(),
                got: row.len(),
                expected: self.columns.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Copy with every value passed through [`round_sig`].
    pub fn rounded(&self) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().copied().map(round_sig).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// Metadata as `# key=value` lines, then an RFC 4180 body.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), TableError> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_value(x)))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let mut metadata = BTreeMap::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            let rest = rest.trim_end_matches(['\r', '\n']).trim_start();
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| TableError::Metadata(line.to_string()))?;
            metadata.insert(k.to_string(), v.to_string());
            body_start += line.len();
        }
        let mut r = csv::Reader::from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut table = Self {
            columns,
            rows: Vec::new(),
            metadata,
        };
        for record in r.records() {
            let record = record?;
            let row = record
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| TableError::Number(s.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.push_row(row)?;
        }
        Ok(table)
    }

    /// `{"metadata": {...}, "columns": [...], "data": {column: [values]}}`.
    pub fn to_json(&self) -> Value {
        let metadata: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut data = Map::new();
        for (j, name) in self.columns.iter().enumerate() {
            let col = self.rows.iter().map(|r| json_number(r[j])).collect();
            data.insert(name.clone(), Value::Array(col));
        }
        serde_json::json!({
            "metadata": metadata,
            "columns": self.columns,
            "data": data,
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), TableError> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)?;
        Ok(())
    }
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x))
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format_value(x)))
}
