//! In-memory result tables with CSV and JSON renderings.
//!
//! CSV: comma separated, LF line endings, header row first. Every ratio
//! column `x` is followed by `x_f64`, the same value to 17 significant
//! digits. JSON carries ratios only as exact `"num/den"` strings:
//!
//! ```json
//! {"columns":[{"name":"c","kind":"int"}, ...],"rows":[[3, ...], ...]}
//! ```

use std::io::Write;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed table: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Int,
    Text,
    Ratio,
    Float,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Null,
    Int(i64),
    Text(String),
    Ratio(i64, u64),
    Float(f64),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn uint(v: u64) -> Cell {
        Cell::Int(i64::try_from(v).expect("table integers fit in i64"))
    }

    pub fn ratio(r: Ratio<u64>) -> Cell {
        Cell::Ratio(i64::try_from(*r.numer()).expect("ratio numerator fits in i64"), *r.denom())
    }

    fn fits(&self, kind: ColumnKind) -> bool {
        matches!(
            (self, kind),
            (Cell::Null, _)
                | (Cell::Int(_), ColumnKind::Int)
                | (Cell::Text(_), ColumnKind::Text)
                | (Cell::Ratio(..), ColumnKind::Ratio)
                | (Cell::Float(_), ColumnKind::Float)
        )
    }
}

/// 17 significant digits, scientific notation.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, ColumnKind)]) -> Self {
        Table {
            columns: columns
                .iter()
                .map(|&(name, kind)| Column { name: name.to_string(), kind })
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        for (cell, col) in row.iter().zip(&self.columns) {
            assert!(cell.fits(col.kind), "cell {cell:?} in {} column {:?}", col.kind_name(), col.name);
        }
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), TableError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let mut header = Vec::new();
        for col in &self.columns {
            header.push(col.name.clone());
            if col.kind == ColumnKind::Ratio {
                header.push(format!("{}_f64", col.name));
            }
        }
        w.write_record(&header)?;
        let mut record = Vec::with_capacity(header.len());
        for row in &self.rows {
            record.clear();
            for (cell, col) in row.iter().zip(&self.columns) {
                match cell {
                    Cell::Null => {
                        record.push(String::new());
                        if col.kind == ColumnKind::Ratio {
                            record.push(String::new());
                        }
                    }
                    Cell::Int(v) => record.push(v.to_string()),
                    Cell::Text(s) => record.push(s.clone()),
                    Cell::Ratio(n, d) => {
                        record.push(format!("{n}/{d}"));
                        record.push(format_f64(*n as f64 / *d as f64));
                    }
                    Cell::Float(v) => record.push(format_f64(*v)),
                }
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, TableError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|cell| match cell {
                            Cell::Null => Value::Null,
                            Cell::Int(v) => json!(v),
                            Cell::Text(s) => json!(s),
                            Cell::Ratio(n, d) => json!(format!("{n}/{d}")),
                            Cell::Float(v) => json!(v),
                        })
                        .collect(),
                )
            })
            .collect();
        #[derive(Serialize)]
        struct Doc<'a> {
            columns: &'a [Column],
            rows: Vec<Value>,
        }
        let mut s = serde_json::to_string(&Doc { columns: &self.columns, rows })?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Table, TableError> {
        #[derive(Deserialize)]
        struct Raw {
            columns: Vec<Column>,
            rows: Vec<Vec<Value>>,
        }
        let raw: Raw = serde_json::from_str(s)?;
        let bad = |msg: String| TableError::Malformed(msg);
        let mut rows = Vec::with_capacity(raw.rows.len());
        for values in raw.rows {
            if values.len() != raw.columns.len() {
                return Err(bad(format!("row has {} cells, expected {}", values.len(), raw.columns.len())));
            }
            let row = values
                .into_iter()
                .zip(&raw.columns)
                .map(|(v, col)| match (col.kind, v) {
                    (_, Value::Null) => Ok(Cell::Null),
                    (ColumnKind::Int, Value::Number(n)) => {
                        n.as_i64().map(Cell::Int).ok_or_else(|| bad(format!("bad int {n}")))
                    }
                    (ColumnKind::Float, Value::Number(n)) => {
                        n.as_f64().map(Cell::Float).ok_or_else(|| bad(format!("bad float {n}")))
                    }
                    (ColumnKind::Text, Value::String(s)) => Ok(Cell::Text(s)),
                    (ColumnKind::Ratio, Value::String(s)) => parse_ratio(&s)
                        .ok_or_else(|| bad(format!("bad ratio {s:?}"))),
                    (kind, v) => Err(bad(format!("{v} in {kind:?} column {:?}", col.name))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Table { columns: raw.columns, rows })
    }
}

impl Column {
    fn kind_name(&self) -> &'static str {
        match self.kind {
            ColumnKind::Int => "int",
            ColumnKind::Text => "text",
            ColumnKind::Ratio => "ratio",
            ColumnKind::Float => "float",
        }
    }
}

fn parse_ratio(s: &str) -> Option<Cell> {
    let (n, d) = s.split_once('/')?;
    Some(Cell::Ratio(n.parse().ok()?, d.parse().ok()?))
}
