//! File formats: JSON-lines datasets, plain CSV Gram matrices, and JSON
//! blobs for models, configs and reports.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qkernel::KernelMatrix;
use crate::states::StateRecord;

/// Read a JSONL dataset, validating every density matrix.
pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<StateRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = vec![];
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: StateRecord = serde_json::from_str(&line)
            .map_err(|e| Error::format(path, format!("line {}: {e}", lineno + 1)))?;
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::format(path, "no records"));
    }
    Ok(records)
}

/// Write a JSONL dataset, one record per line.
pub fn write_records(path: impl AsRef<Path>, records: &[StateRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut w, record).map_err(|e| Error::json(path, e))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Write a Gram matrix as headerless CSV, row-major.
pub fn write_gram_csv(path: impl AsRef<Path>, k: &KernelMatrix) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for i in 0..k.rows {
        let row: Vec<String> = k.row(i).iter().map(|v| format!("{v}")).collect();
        writeln!(w, "{}", row.join(",")).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read a headerless CSV kernel matrix; square matrices symmetric within
/// 1e-12 get the symmetric flag.
pub fn read_gram_csv(path: impl AsRef<Path>) -> Result<KernelMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut values = vec![];
    let mut cols = None;
    let mut rows = 0usize;
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|e| {
                    Error::format(
                        path,
                        format!("line {}: bad number {tok:?}: {e}", lineno + 1),
                    )
                })
            })
            .collect::<Result<_>>()?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(Error::format(
                    path,
                    format!(
                        "line {}: expected {c} columns, got {}",
                        lineno + 1,
                        row.len()
                    ),
                ));
            }
            _ => {}
        }
        values.extend(row);
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::format(path, "empty kernel file"))?;
    let mut k = KernelMatrix {
        rows,
        cols,
        values,
        symmetric: false,
    };
    if rows == cols {
        let symmetric =
            (0..rows).all(|i| (i + 1..cols).all(|j| (k.get(i, j) - k.get(j, i)).abs() <= 1e-12));
        k.symmetric = symmetric;
    }
    k.validate()?;
    Ok(k)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::json(path, e))?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::json(path, e))
}
