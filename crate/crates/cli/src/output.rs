//! Columnar result tables and their CSV / JSON encodings.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnValues {
    Index(Vec<usize>),
    Real(Vec<f64>),
}

impl ColumnValues {
    fn len(&self) -> usize {
        match self {
            ColumnValues::Index(v) => v.len(),
            ColumnValues::Real(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub values: ColumnValues,
}

/// Equal-length named columns, in output order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<Column>,
}

impl Table {
    pub fn push_real(&mut self, name: &'static str, values: Vec<f64>) {
        self.push(name, ColumnValues::Real(values));
    }

    pub fn push_index(&mut self, name: &'static str, values: Vec<usize>) {
        self.push(name, ColumnValues::Index(values));
    }

    fn push(&mut self, name: &'static str, values: ColumnValues) {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.values.len(), values.len(), "column {name} has mismatched length");
        }
        self.columns.push(Column { name, values });
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    /// Header line plus one line per row; reals at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        writeln!(out, "{}", header.join(","))?;
        let mut line = String::new();
        for r in 0..self.rows() {
            line.clear();
            for (i, c) in self.columns.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                match &c.values {
                    ColumnValues::Index(v) => line.push_str(&v[r].to_string()),
                    ColumnValues::Real(v) => line.push_str(&format!("{:.16e}", v[r])),
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    fn to_json_map(&self) -> Map<String, Value> {
        let mut map = Map::new();
        for c in &self.columns {
            let v = match &c.values {
                ColumnValues::Index(v) => serde_json::to_value(v),
                ColumnValues::Real(v) => serde_json::to_value(v),
            }
            .expect("finite columns serialize");
            map.insert(c.name.to_string(), v);
        }
        map
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaGrid {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub mode: String,
    pub q: f64,
    pub alpha: Amplitude,
    pub fock_n: Option<usize>,
    #[serde(rename = "N")]
    pub truncation: usize,
    pub theta: ThetaGrid,
    pub tol: f64,
    pub tail_bound: f64,
    pub version: String,
}

pub fn write_json<W: Write>(meta: &Meta, table: &Table, mut out: W) -> Result<(), serde_json::Error> {
    let mut root = Map::new();
    root.insert("meta".into(), serde_json::to_value(meta)?);
    root.insert("data".into(), Value::Object(table.to_json_map()));
    serde_json::to_writer_pretty(&mut out, &Value::Object(root))?;
    out.write_all(b"\n").map_err(serde_json::Error::io)
}
