//! Plot-ready tables with fixed float formatting for CSV and JSON output.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits written for every float.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
    }
}

/// Rounds `x` to the precision written by [`format_float`].
pub fn round_float(x: f64) -> f64 {
    format_float(x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Every value rounded to the exported precision.
    pub fn rounded(&self) -> Self {
        Self {
            columns: self.columns.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().copied().map(round_float).collect())
                .collect(),
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().copied().map(format_float).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv_reader<R: std::io::Read>(reader: R, path: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
        let columns: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::csv(path, e))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = Table {
            columns,
            rows: Vec::new(),
        };
        for record in rdr.records() {
            let record = record.map_err(|e| Error::csv(path, e))?;
            let row = record
                .iter()
                .map(|cell| {
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Config(format!("{}: bad number {cell:?}: {e}", path.display())))
                })
                .collect::<Result<Vec<f64>>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file, path)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rounded().rows,
        })
    }
}

/// JSON document with the schema version, a metadata block and a payload.
pub fn json_document(metadata: Value, payload: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "metadata": metadata,
        "data": payload,
    })
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Writes `table` as CSV, or as a JSON document carrying `metadata`.
pub fn export(table: &Table, format: Format, path: impl AsRef<Path>, metadata: Value) -> Result<()> {
    match format {
        Format::Csv => write_text(path, &table.to_csv_string()),
        Format::Json => write_json(path, &json_document(metadata, table.to_json_value())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_float(0.0), "0.00000000000e0");
        assert_eq!(format_float(-2.5e7), "-2.50000000000e7");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(["a", "b"]);
        assert_eq!(t.to_csv_string(), "a,b\n");
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(["x", "y"]);
        t.push(vec![std::f64::consts::PI, -1e-20]);
        t.push(vec![f64::NAN, 12345.678901234567]);
        let csv = t.to_csv_string();
        let back = Table::from_csv_reader(csv.as_bytes(), Path::new("mem")).unwrap();
        assert_eq!(back.to_csv_string(), csv);
        assert_eq!(back.rows[0], t.rounded().rows[0]);
    }

    #[test]
    fn json_document_has_schema_and_metadata() {
        let mut t = Table::new(["x"]);
        t.push(vec![1.0]);
        let doc = json_document(json!({"steps": 720}), t.to_json_value());
        assert_eq!(doc["schema_version"], SCHEMA_VERSION);
        assert_eq!(doc["metadata"]["steps"], 720);
        assert_eq!(doc["data"]["columns"][0], "x");
    }

    #[test]
    fn write_failure_reports_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let err = write_text(blocker.join("sub/out.csv"), "a").unwrap_err();
        assert!(err.to_string().contains("file"));
        assert!(matches!(err, Error::Io { .. }));
    }
}
