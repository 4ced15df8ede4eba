//! Problem definition files: a TOML document with a version, a problem kind,
//! solver parameters and output options.

use std::fmt;

use sepvar::sturm::Boundary;
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;

/// A message tied to the dotted path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl FieldError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Uniform sampling of `points` values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub format: Format,
    pub grid: Option<Grid>,
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpecFile {
    pub schema_version: i64,
    pub kind: String,
    pub parameters: Table,
    pub output: OutputSpec,
}

fn check_keys(table: &Table, prefix: &str, allowed: &[&str]) -> Result<(), FieldError> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            let path = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
            return Err(FieldError::new(path, format!("unknown key (expected one of: {})", allowed.join(", "))));
        }
    }
    Ok(())
}

pub fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn to_usize(v: &Value, path: &str, min: usize) -> Result<usize, FieldError> {
    match v {
        Value::Integer(i) if *i >= min as i64 => Ok(*i as usize),
        Value::Integer(i) => Err(FieldError::new(path, format!("must be at least {min}, got {i}"))),
        _ => Err(FieldError::new(path, "expected an integer")),
    }
}

fn parse_grid(v: &Value) -> Result<Grid, FieldError> {
    let t = v.as_table().ok_or_else(|| FieldError::new("output.grid", "expected a table {start, stop, points}"))?;
    check_keys(t, "output.grid", &["start", "stop", "points"])?;
    let num = |k: &str| -> Result<f64, FieldError> {
        let path = format!("output.grid.{k}");
        let v = t.get(k).ok_or_else(|| FieldError::new(&path, "required"))?;
        as_f64(v).filter(|x| x.is_finite()).ok_or_else(|| FieldError::new(&path, "expected a finite number"))
    };
    let start = num("start")?;
    let stop = num("stop")?;
    let points = to_usize(t.get("points").ok_or_else(|| FieldError::new("output.grid.points", "required"))?, "output.grid.points", 1)?;
    if points > 1 && stop <= start {
        return Err(FieldError::new("output.grid.stop", "must exceed start"));
    }
    Ok(Grid { start, stop, points })
}

impl ProblemSpecFile {
    /// Validate the document structure. Parameters are checked later against
    /// the schema of the chosen kind.
    pub fn from_table(doc: &Table) -> Result<Self, FieldError> {
        check_keys(doc, "", &["schema_version", "kind", "parameters", "output"])?;
        let schema_version = match doc.get("schema_version") {
            Some(Value::Integer(v)) => *v,
            Some(_) => return Err(FieldError::new("schema_version", "expected an integer")),
            None => return Err(FieldError::new("schema_version", "required")),
        };
        if schema_version != SCHEMA_VERSION {
            return Err(FieldError::new("schema_version", format!("unsupported version {schema_version}, expected {SCHEMA_VERSION}")));
        }
        let kind = match doc.get("kind") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(FieldError::new("kind", "expected a string")),
            None => return Err(FieldError::new("kind", "required")),
        };
        let parameters = match doc.get("parameters") {
            Some(Value::Table(t)) => t.clone(),
            Some(_) => return Err(FieldError::new("parameters", "expected a table")),
            None => Table::new(),
        };
        let mut output = OutputSpec {
            format: Format::Csv,
            grid: None,
            truncation: None,
        };
        match doc.get("output") {
            Some(Value::Table(t)) => {
                check_keys(t, "output", &["format", "grid", "truncation"])?;
                if let Some(v) = t.get("format") {
                    output.format = v
                        .as_str()
                        .and_then(Format::parse)
                        .ok_or_else(|| FieldError::new("output.format", "expected \"csv\" or \"json\""))?;
                }
                if let Some(v) = t.get("grid") {
                    output.grid = Some(parse_grid(v)?);
                }
                if let Some(v) = t.get("truncation") {
                    output.truncation = Some(to_usize(v, "output.truncation", 1)?);
                }
            }
            Some(_) => return Err(FieldError::new("output", "expected a table")),
            None => {}
        }
        Ok(Self {
            schema_version,
            kind,
            parameters,
            output,
        })
    }
}

/// Parse the right-hand side of `--set key=value` as a TOML value; bare
/// words fall back to strings.
fn parse_override_value(raw: &str) -> Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

/// Apply `key=value` overrides to the raw document. Keys without a leading
/// `parameters.`/`output.` section are taken as parameter names.
pub fn apply_overrides(doc: &mut Table, overrides: &[String]) -> Result<(), FieldError> {
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| FieldError::new("--set", format!("expected key=value, got {item:?}")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(FieldError::new("--set", format!("empty key in {item:?}")));
        }
        let mut parts: Vec<&str> = key.split('.').collect();
        if !matches!(parts[0], "schema_version" | "kind" | "parameters" | "output") {
            parts.insert(0, "parameters");
        }
        let value = parse_override_value(raw.trim());
        let mut cur = &mut *doc;
        for (i, part) in parts.iter().enumerate() {
            if i + 1 == parts.len() {
                cur.insert(part.to_string(), value);
                break;
            }
            let entry = cur.entry(part.to_string()).or_insert_with(|| Value::Table(Table::new()));
            cur = entry
                .as_table_mut()
                .ok_or_else(|| FieldError::new(parts[..=i].join("."), "cannot set a field inside a non-table value"))?;
        }
    }
    Ok(())
}

/// Boundary values: "dirichlet", "neumann", or a number h ≥ 0 for the
/// Robin condition X′ ∓ hX = 0.
pub fn parse_boundary(v: &Value) -> Option<Boundary> {
    match v {
        Value::String(s) if s == "dirichlet" => Some(Boundary::Dirichlet),
        Value::String(s) if s == "neumann" => Some(Boundary::NEUMANN),
        _ => as_f64(v).filter(|h| *h >= 0.0 && h.is_finite()).map(Boundary::Robin),
    }
}
