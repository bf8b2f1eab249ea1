//! Tabular reports and their CSV / JSON encodings.
//!
//! Floats are printed with 15 significant digits in the style of `%.15g`, so
//! output is stable across runs and platforms.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::CliError;

pub const SCHEMA: &str = "exzero-schema v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    /// An absent value, printed as `none`.
    None,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v.into())
    }
}
impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
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
        v.map_or(Cell::None, Into::into)
    }
}

/// `%.15g`: fixed notation for decimal exponents in `[-4, 15)`, scientific
/// otherwise; trailing zeros stripped.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::None => "none".into(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::Number(v.to_string().parse::<Number>().expect("integer literal")),
            Cell::Float(v) if v.is_finite() => {
                // arbitrary_precision keeps the 15-digit text verbatim.
                Value::Number(format_float(*v).parse::<Number>().expect("numeric literal"))
            }
            Cell::Float(_) | Cell::None => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&'static str]) -> Self {
        Self { name: name.to_string(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), meta: Vec::new(), tables: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    /// Comment lines carry the schema, command and metadata; each table is
    /// introduced by `# table: name` followed by a header row.
    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        writeln!(out, "# {SCHEMA}")?;
        writeln!(out, "# command: {}", self.command)?;
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {}", v.render())?;
        }
        for table in &self.tables {
            writeln!(out, "# table: {}", table.name)?;
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(&table.columns).map_err(csv_err)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
            out.write_all(&bytes)?;
        }
        Ok(())
    }

    /// `{"schema", "command", "meta": {...}, "rows": [{"table": name, ...}]}`.
    pub fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), v.to_json());
        }
        let mut rows = Vec::new();
        for table in &self.tables {
            for row in &table.rows {
                let mut obj = Map::new();
                obj.insert("table".into(), Value::String(table.name.clone()));
                for (col, cell) in table.columns.iter().zip(row) {
                    obj.insert((*col).to_string(), cell.to_json());
                }
                rows.push(Value::Object(obj));
            }
        }
        let mut root = Map::new();
        root.insert("schema".into(), Value::String(SCHEMA.into()));
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("meta".into(), Value::Object(meta));
        root.insert("rows".into(), Value::Array(rows));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(root)).map_err(|e| CliError::Io(e.into()))?;
        writeln!(out)?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.into())
}
