//! CSV tables, reports and the metadata sidecar.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gof::{TW1_TABLE_SHA256, TW1_TABLE_VERSION};

/// A CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// Text rendering of optional numbers for table cells.
pub fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Named files produced by one run, plus a JSON summary for the sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
    pub summary: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
struct TableInfo {
    version: &'static str,
    sha256: &'static str,
}

#[derive(Debug, Clone, Serialize)]
struct Metadata<'a, S: Serialize> {
    kind: &'a str,
    seed: u64,
    artifact_version: &'static str,
    tw1_table: TableInfo,
    spec: &'a S,
    files: Vec<&'a str>,
    summary: &'a serde_json::Value,
}

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes every output file into `dir` together with `meta.json`.
pub fn write_run<S: Serialize>(dir: &Path, kind: &str, seed: u64, spec: &S, out: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, contents) in &out.files {
        write_file(&dir.join(name), contents)?;
    }
    let meta = Metadata {
        kind,
        seed,
        artifact_version: env!("CARGO_PKG_VERSION"),
        tw1_table: TableInfo {
            version: TW1_TABLE_VERSION,
            sha256: TW1_TABLE_SHA256,
        },
        spec,
        files: out.files.iter().map(|(n, _)| n.as_str()).collect(),
        summary: &out.summary,
    };
    write_file(&dir.join("meta.json"), &to_json_pretty(&meta)?)
}
