//! Plot-ready tables. Every file starts with the schema version and the full
//! run configuration; floats carry 17 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const SCHEMA: &str = "pseudodot/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    Missing,
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Float(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Float(_) | Cell::Missing => s.serialize_none(),
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(u64::from(v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Ordered `key -> value` pairs, serialised as a JSON object in insertion
/// order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pairs(pub Vec<(String, String)>);

impl Pairs {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }

    pub fn from_config(cfg: &RunConfig) -> Self {
        Self(cfg.pairs().into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

impl Serialize for Pairs {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k, v)))
    }
}

struct Rows<'a>(&'a [Vec<Cell>]);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for row in self.0 {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: &'static str,
    pub config: Pairs,
    /// Per-file parameters (well depth, quantum numbers, energy, ...).
    pub meta: Pairs,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(kind: &'static str, cfg: &RunConfig, columns: Vec<&'static str>) -> Self {
        Self {
            kind,
            config: Pairs::from_config(cfg),
            meta: Pairs::default(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut head = format!("# schema={SCHEMA} table={}\n", self.kind);
        for (k, v) in &self.config.0 {
            head.push_str(&format!("# config {k}={v}\n"));
        }
        for (k, v) in &self.meta.0 {
            head.push_str(&format!("# meta {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Numerical(format!("csv encoding failed: {e}"));
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).map_err(csv_err)?;
        }
        let body = w
            .into_inner()
            .map_err(|e| CliError::Numerical(format!("csv encoding failed: {e}")))?;
        head.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(head)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'static str,
            table: &'static str,
            config: &'a Pairs,
            meta: &'a Pairs,
            columns: &'a [&'static str],
            rows: Rows<'a>,
        }
        let doc = Doc {
            schema: SCHEMA,
            table: self.kind,
            config: &self.config,
            meta: &self.meta,
            columns: &self.columns,
            rows: Rows(&self.rows),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
        s.push('\n');
        s
    }

    /// Writes `<dir>/<stem>.<ext>` and returns the path.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf, CliError> {
        let text = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json(),
        };
        write_file(dir, &format!("{stem}.{}", format.extension()), &text)
    }
}

pub fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// File-name fragment for a float parameter: `2.5 -> 2.5`, `1 -> 1`.
pub fn tag_float(v: f64) -> String {
    v.to_string()
}
