//! Tabular output shared by every command.

use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// One table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Rows with named columns; complex values occupy `<name>_re`, `<name>_im`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Free-form summary lines (counts, criterion outcome).
    pub notes: Vec<String>,
}

/// Builder for a single row that also records the column names.
#[derive(Default)]
pub struct Row {
    pub columns: Vec<String>,
    pub cells: Vec<Cell>,
}

impl Row {
    pub fn new() -> Self {
        Row::default()
    }

    pub fn put(mut self, name: &str, v: impl Into<Cell>) -> Self {
        self.columns.push(name.to_string());
        self.cells.push(v.into());
        self
    }

    pub fn complex(self, name: &str, z: C64) -> Self {
        self.put(&format!("{name}_re"), z.re).put(&format!("{name}_im"), z.im)
    }
}

impl Table {
    pub fn new(command: &str) -> Self {
        Table {
            command: command.to_string(),
            columns: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_columns(command: &str, columns: &[&str]) -> Self {
        let mut t = Table::new(command);
        t.columns = columns.iter().map(|c| c.to_string()).collect();
        t
    }

    /// Appends a row; the first row fixes the columns.
    pub fn push(&mut self, row: Row) {
        if self.columns.is_empty() && self.rows.is_empty() {
            self.columns = row.columns;
        }
        debug_assert_eq!(self.columns.len(), row.cells.len());
        self.rows.push(row.cells);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(out, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo");
        t.push(
            Row::new()
                .put("k", 3usize)
                .complex("z", C64::new(0.1, -1.0 / 3.0))
                .put("note", "a, b"),
        );
        t.push(
            Row::new()
                .put("k", 4usize)
                .complex("z", C64::new(1e-300, 2.5))
                .put("note", "ok"),
        );
        t.notes.push("two rows".into());
        t
    }

    #[test]
    fn csv_has_paired_columns_and_full_precision() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "k,z_re,z_im,note");
        let first = lines.next().unwrap();
        assert!(first.starts_with("3,1.0000000000000001e-1,"), "{first}");
        assert!(first.ends_with("\"a, b\""));
        let im: f64 = first.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(im, -1.0 / 3.0);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        let back: Table = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, t);
    }
}
