//! Report model and its CSV / JSON serializations.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    /// Resolved parameters, defaults included.
    pub params: BTreeMap<String, Value>,
    pub format: Format,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// A dense matrix, columns named `c0, c1, …`.
    pub fn matrix(name: impl Into<String>, rows: usize, cols: usize, at: impl Fn(usize, usize) -> f64) -> Self {
        Self {
            name: name.into(),
            columns: (0..cols).map(|j| format!("c{j}")).collect(),
            rows: (0..rows).map(|i| (0..cols).map(|j| at(i, j)).collect()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: Manifest,
    pub data: Vec<Table>,
    pub metadata: Metadata,
}

/// Shortest representation that parses back to the same double.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_string()
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn header_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => fmt_f64(f),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn header_lines(report: &Report) -> Vec<String> {
    let m = &report.manifest;
    let md = &report.metadata;
    let mut lines = vec![
        format!("command={}", m.command),
        format!("version={}", md.version),
    ];
    lines.extend(m.params.iter().map(|(k, v)| format!("param.{k}={}", header_value(v))));
    lines.extend(md.tolerances.iter().map(|(k, v)| format!("tolerance.{k}={}", fmt_f64(*v))));
    lines.extend(md.extra.iter().map(|(k, v)| format!("meta.{k}={}", header_value(v))));
    if let Some(t) = md.timestamp {
        lines.push(format!("timestamp={t}"));
    }
    lines
}

fn write_table(out: &mut Vec<u8>, table: &Table) -> Result<(), CliError> {
    writeln!(out, "# table={}", table.name)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| fmt_f64(v))).map_err(csv_err)?;
    }
    out.extend(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?);
    Ok(())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Every table, each introduced by `# table=<name>`, under one header block.
pub fn to_csv(report: &Report) -> Result<Vec<u8>, CliError> {
    to_csv_tables(report, &report.data)
}

fn to_csv_tables(report: &Report, tables: &[Table]) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    for line in header_lines(report) {
        writeln!(out, "# {line}")?;
    }
    for t in tables {
        write_table(&mut out, t)?;
    }
    Ok(out)
}

pub fn to_json(report: &Report) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Write-to-temp-then-rename in the destination directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error.to_string()))?;
    Ok(())
}

/// Emits a report to stdout or to `--out`. With `as_directory`, `--out` is a
/// directory receiving `<stem>.json` or one `<table>.csv` per table.
pub fn emit(report: &Report, out: Option<&Path>, as_directory: Option<&str>) -> Result<Vec<PathBuf>, CliError> {
    let format = report.manifest.format;
    match (out, as_directory) {
        (None, _) => {
            let bytes = match format {
                Format::Csv => to_csv(report)?,
                Format::Json => to_json(report)?,
            };
            match std::io::stdout().write_all(&bytes) {
                // Reader went away (e.g. `| head`); nothing left to report.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(Vec::new()),
                r => r.map(|()| Vec::new()).map_err(CliError::from),
            }
        }
        (Some(path), None) => {
            let bytes = match format {
                Format::Csv => to_csv(report)?,
                Format::Json => to_json(report)?,
            };
            write_atomic(path, &bytes)?;
            Ok(vec![path.to_path_buf()])
        }
        (Some(dir), Some(stem)) => {
            std::fs::create_dir_all(dir)?;
            match format {
                Format::Json => {
                    let path = dir.join(format!("{stem}.json"));
                    write_atomic(&path, &to_json(report)?)?;
                    Ok(vec![path])
                }
                Format::Csv => report
                    .data
                    .iter()
                    .map(|t| {
                        let path = dir.join(format!("{}.csv", t.name));
                        write_atomic(&path, &to_csv_tables(report, std::slice::from_ref(t))?)?;
                        Ok(path)
                    })
                    .collect(),
            }
        }
    }
}
