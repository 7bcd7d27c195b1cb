//! Tabular output shared by the harness and the command line.
//!
//! CSV layout: zero or more metadata lines `# key=value`, one header line,
//! then one record per row. Fields are quoted only when needed (RFC 4180).
//! Floats use Rust's shortest round-trip formatting, so identical results
//! produce identical bytes. The json-lines layout is one
//! `{"metadata": {...}}` object followed by one object per row keyed by the
//! header.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v:?}"),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: Vec<(String, Cell)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { metadata: Vec::new(), header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.metadata.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&bytes).expect("csv output is utf-8"));
        out
    }

    pub fn to_json_lines(&self) -> String {
        let meta: Map<String, Value> = self.metadata.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let mut out = serde_json::json!({ "metadata": meta }).to_string();
        out.push('\n');
        for row in &self.rows {
            let obj: Map<String, Value> = self.header.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::JsonLines => self.to_json_lines(),
        }
    }

    /// Writes the table to `path`, reporting failures with the path.
    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        let io = |source| Error::Io { path: path.to_path_buf(), source };
        let mut file = std::fs::File::create(path).map_err(io)?;
        file.write_all(self.render(format).as_bytes()).map_err(io)?;
        file.flush().map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["m", "rate", "note"]);
        t.meta("seed", 3u64).meta("hash", "abc");
        t.push(vec![8usize.into(), 0.5.into(), "a, \"b\"".into()]);
        t.push(vec![16usize.into(), 1.0.into(), Cell::Empty]);
        t
    }

    #[test]
    fn csv_layout_and_quoting() {
        let s = sample().to_csv();
        assert_eq!(s, "# seed=3\n# hash=abc\nm,rate,note\n8,0.5,\"a, \"\"b\"\"\"\n16,1.0,\n");
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(s.as_bytes());
        let rec: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(&rec[0][2], "a, \"b\"");
    }

    #[test]
    fn empty_table_is_header_only() {
        let s = Table::new(["a", "b"]).to_csv();
        assert_eq!(s, "a,b\n");
    }

    #[test]
    fn json_lines() {
        let s = sample().to_json_lines();
        let lines: Vec<Value> = s.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0]["metadata"]["seed"], 3);
        assert_eq!(lines[1]["rate"], 0.5);
        assert_eq!(lines[2]["note"], Value::Null);
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456789.125] {
            let text = Cell::Float(v).to_string();
            assert_eq!(text.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn write_reports_path() {
        let err = sample().write(Path::new("/nonexistent-dir/out.csv"), Format::Csv).unwrap_err();
        match err {
            Error::Io { path, .. } => assert!(path.ends_with("out.csv")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
