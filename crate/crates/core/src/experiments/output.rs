//! Result sets and their CSV, JSON and SVG encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named numeric columns of equal length plus ordered metadata.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultSet {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            _ => Err(Error::Config(format!("unknown output format {s:?}"))),
        }
    }
}

fn clean(text: &str) -> String {
    text.replace(['\n', '\r'], " ")
}

impl ResultSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> &mut Self {
        self.columns.push(Column {
            name: name.into(),
            values,
        });
        self
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    /// Non-empty with equal column lengths.
    pub fn validate(&self) -> Result<()> {
        let first = self.columns.first().ok_or(Error::EmptyResult)?;
        for c in &self.columns {
            if c.values.len() != first.values.len() {
                return Err(Error::RaggedColumns(first.values.len(), c.values.len()));
            }
        }
        Ok(())
    }
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn to_csv(rs: &ResultSet) -> Result<String> {
    rs.validate()?;
    let mut out = String::new();
    for (k, v) in &rs.metadata {
        let _ = writeln!(out, "# {}: {}", clean(k).replace(':', "_"), clean(v));
    }
    let header: Vec<String> = rs
        .columns
        .iter()
        .map(|c| {
            c.name
                .chars()
                .enumerate()
                .map(|(i, ch)| match ch {
                    ',' => '_',
                    '#' if i == 0 => '_',
                    ch if ch.is_control() => '_',
                    ch => ch,
                })
                .collect::<String>()
        })
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..rs.rows() {
        let row: Vec<String> = rs
            .columns
            .iter()
            .map(|c| format_value(c.values[i]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Reads CSV written by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<ResultSet> {
    let mut rs = ResultSet::new();
    let mut header: Option<Vec<String>> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if let Some(meta) = line.strip_prefix('#') {
            if header.is_some() {
                return Err(Error::Csv {
                    line: line_no,
                    reason: "metadata after header".into(),
                });
            }
            let meta = meta.trim_start();
            let (k, v) = meta.split_once(':').ok_or_else(|| Error::Csv {
                line: line_no,
                reason: "metadata line without ':'".into(),
            })?;
            rs.meta(k.trim(), v.trim());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        match &header {
            None => {
                let names: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
                if names.iter().any(|n| n.is_empty()) {
                    return Err(Error::Csv {
                        line: line_no,
                        reason: "empty column name".into(),
                    });
                }
                // A leading '#' would read back as metadata.
                if names.iter().any(|n| n.starts_with('#')) {
                    return Err(Error::Csv {
                        line: line_no,
                        reason: "column name starts with '#'".into(),
                    });
                }
                if names.iter().any(|n| n.chars().any(char::is_control)) {
                    return Err(Error::Csv {
                        line: line_no,
                        reason: "control character in column name".into(),
                    });
                }
                for n in &names {
                    rs.push(n.clone(), Vec::new());
                }
                header = Some(names);
            }
            Some(names) => {
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != names.len() {
                    return Err(Error::Csv {
                        line: line_no,
                        reason: format!("expected {} fields, found {}", names.len(), fields.len()),
                    });
                }
                for (col, field) in rs.columns.iter_mut().zip(fields) {
                    let v: f64 = field.trim().parse().map_err(|_| Error::Csv {
                        line: line_no,
                        reason: format!("not a number: {field:?}"),
                    })?;
                    col.values.push(v);
                }
            }
        }
    }
    if header.is_none() {
        return Err(Error::Csv {
            line: text.lines().count(),
            reason: "missing header".into(),
        });
    }
    Ok(rs)
}

#[derive(Serialize, Deserialize)]
struct JsonColumn {
    name: String,
    values: Vec<Option<f64>>,
}

#[derive(Serialize, Deserialize)]
struct JsonResult {
    metadata: BTreeMap<String, String>,
    columns: Vec<JsonColumn>,
}

/// `{"metadata": {...}, "columns": [{"name", "values"}]}`; non-finite values become `null`.
pub fn to_json(rs: &ResultSet) -> Result<String> {
    rs.validate()?;
    let doc = JsonResult {
        metadata: rs.metadata.iter().cloned().collect(),
        columns: rs
            .columns
            .iter()
            .map(|c| JsonColumn {
                name: c.name.clone(),
                values: c
                    .values
                    .iter()
                    .map(|v| v.is_finite().then_some(*v))
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Config(e.to_string()))
}

/// Reads JSON written by [`to_json`]; `null` becomes NaN.
pub fn parse_json(text: &str) -> Result<ResultSet> {
    let doc: JsonResult = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let rs = ResultSet {
        metadata: doc.metadata.into_iter().collect(),
        columns: doc
            .columns
            .into_iter()
            .map(|c| Column {
                name: c.name,
                values: c
                    .values
                    .into_iter()
                    .map(|v| v.unwrap_or(f64::NAN))
                    .collect(),
            })
            .collect(),
    };
    rs.validate()?;
    Ok(rs)
}

pub fn render(rs: &ResultSet, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => to_csv(rs),
        OutputFormat::Json => to_json(rs),
        OutputFormat::Svg => crate::svg::line_plot(rs),
    }
}

/// Renders and writes to `path`.
pub fn emit(rs: &ResultSet, format: OutputFormat, path: &Path) -> Result<()> {
    let text = render(rs, format)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
