//! CSV data ingestion: extract one numeric column into a time series,
//! tolerating missing cells the way long observational records demand.

use std::path::Path;

use anyhow::{bail, Context, Result};
use exindex::Series;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSel {
    Index(usize),
    Name(String),
}

impl ColumnSel {
    /// `--column` accepts a 0-based index or a header name.
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => ColumnSel::Index(i),
            Err(_) => ColumnSel::Name(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingPolicy {
    /// Skip empty/non-numeric cells, reporting how many were dropped.
    Drop,
    /// Any unusable cell is an error.
    Fail,
}

/// Read `column` from a headered CSV file. Returns the series and the number
/// of dropped cells.
pub fn ingest_csv(path: &Path, column: &ColumnSel, policy: MissingPolicy) -> Result<(Series, usize)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let headers = reader.headers().context("cannot read the header row")?.clone();
    let col = match column {
        ColumnSel::Index(i) => {
            if *i >= headers.len() {
                bail!("column index {i} out of range: the header has {} fields", headers.len());
            }
            *i
        }
        ColumnSel::Name(name) => headers
            .iter()
            .position(|h| h.trim() == name)
            .with_context(|| format!("no column named `{name}` in the header"))?,
    };

    let mut values = Vec::new();
    let mut dropped = 0usize;
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2; // 1-based, after the header
        let record = record.with_context(|| format!("line {line}: malformed CSV record"))?;
        let cell = record.get(col).unwrap_or("").trim();
        match cell.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) => match policy {
                MissingPolicy::Drop => dropped += 1,
                MissingPolicy::Fail => {
                    bail!("line {line}: cannot parse `{cell}` as a number")
                }
            },
        }
    }
    if values.is_empty() {
        bail!("the selected column contains no usable values");
    }
    let series = Series::new(values).context("ingested data failed validation")?;
    Ok((series, dropped))
}
