//! CSV tables and JSON summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use serde::Serialize;

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Raw result rows with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// `,`-separated, header first, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

/// Shortest round-trip decimal; empty when absent.
pub fn fmt_f64(x: f64) -> String {
    let mut s = String::new();
    write!(s, "{x}").unwrap();
    s
}

pub fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn fmt_opt_usize(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// JSON summary written next to each CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Summary<'a, A: Serialize, C: Serialize> {
    pub experiment: &'a str,
    pub tool_version: &'a str,
    pub config: &'a C,
    pub aggregates: A,
}

/// Writes `<dir>/<name>.csv` and `<dir>/<name>.json`, returning both paths.
pub fn write_outputs<A: Serialize, C: Serialize>(
    dir: &FsPath,
    name: &str,
    table: &Table,
    config: &C,
    aggregates: A,
) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{name}.csv"));
    let json = dir.join(format!("{name}.json"));
    fs::write(&csv, table.to_csv())?;
    let summary = Summary {
        experiment: name,
        tool_version: TOOL_VERSION,
        config,
        aggregates,
    };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    fs::write(&json, text)?;
    Ok((csv, json))
}
