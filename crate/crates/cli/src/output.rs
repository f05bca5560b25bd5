use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// Run metadata. Nothing time-dependent is recorded, so reruns are
/// byte-identical.
#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub program: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
}

impl Metadata {
    pub fn current() -> Self {
        Self {
            program: "boolval",
            version: env!("CARGO_PKG_VERSION"),
            schema_version: crate::config::SCHEMA_VERSION,
        }
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)).map_err(|e| CliError::io(path, e))
}

/// Writes JSON to `out` when given, otherwise to stdout.
pub fn emit_json<T: Serialize>(out: Option<&PathBuf>, value: &T) -> Result<()> {
    match out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                ensure_dir(parent)?;
            }
            write_json(p, value)
        }
        None => {
            print!("{}", to_json(value));
            Ok(())
        }
    }
}

pub fn write_csv(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => CliError::io(path, e),
        other => CliError::Usage(format!("csv: {other:?}")),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
