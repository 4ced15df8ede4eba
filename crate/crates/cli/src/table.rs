//! Result tables and their CSV/JSON serialisation.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::spec::Format;

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named real columns of equal length plus descriptive metadata.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    pub metadata: BTreeMap<String, Value>,
}

impl ResultTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn column(mut self, name: &str, values: Vec<f64>) -> Self {
        self.columns.push(Column {
            name: name.to_string(),
            values,
        });
        self
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    /// Equal column lengths, finite entries and finite numeric metadata.
    pub fn check(&self) -> Result<(), String> {
        let n = self.rows();
        for c in &self.columns {
            if c.values.len() != n {
                return Err(format!("column {} has {} rows, expected {n}", c.name, c.values.len()));
            }
            if let Some(i) = c.values.iter().position(|v| !v.is_finite()) {
                return Err(format!("non-finite value {} in column {} row {}", c.values[i], c.name, i + 1));
            }
        }
        for (k, v) in &self.metadata {
            if v.is_null() {
                return Err(format!("metadata field {k} is not a finite number"));
            }
        }
        Ok(())
    }

    fn to_csv(&self) -> Result<Vec<u8>, String> {
        let mut out = Vec::new();
        for (k, v) in &self.metadata {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            write!(out, "# {k}: {text}\r\n").map_err(|e| e.to_string())?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(self.columns.iter().map(|c| c.name.as_str())).map_err(|e| e.to_string())?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| format_real(c.values[i]))).map_err(|e| e.to_string())?;
        }
        w.into_inner().map_err(|e| e.to_string())
    }

    fn to_json(&self) -> Result<Vec<u8>, String> {
        let columns: Vec<Value> = self.columns.iter().map(|c| json!({ "name": c.name, "values": c.values })).collect();
        let doc = json!({ "metadata": self.metadata, "columns": columns });
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| e.to_string())?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        self.check()?;
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Shortest round-trip decimal form; exponent notation for very large or
/// small magnitudes. Always uses '.' as the decimal separator.
pub fn format_real(v: f64) -> String {
    format!("{v:?}")
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
