//! CSV ingestion and the CSV artifacts of a run.
//!
//! Rows and columns in error messages are 1-based, counted as they appear
//! in the file (a header, when present, is row 1).

use std::collections::HashMap;
use std::fs::File;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{DataSet, MembershipMatrix};

/// Which column holds class labels: a header name or a 0-based index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// All-digit strings are indices, anything else is a header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

fn is_number(cell: &str) -> bool {
    cell.trim().parse::<f64>().is_ok()
}

/// Reads a numeric matrix, with an optional header row (detected by a
/// non-numeric feature cell in the first row) and an optional label column.
/// Labels become `1..=m` in order of first appearance.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&LabelColumn>) -> Result<DataSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let csv_err = |row: usize, column: usize, message: String| Error::Csv {
        path: path.to_path_buf(),
        row,
        column,
        message,
    };

    let mut rows: Vec<(usize, csv::StringRecord)> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| {
            let row = e.position().map(|p| p.line() as usize).unwrap_or(i + 1);
            csv_err(row, 0, e.to_string())
        })?;
        if rec.iter().all(|c| c.is_empty()) {
            continue;
        }
        rows.push((i + 1, rec));
    }
    if rows.is_empty() {
        return Err(Error::InvalidData(format!("{}: no data rows", path.display())));
    }

    let width = rows[0].1.len();
    let mut label_idx = match label_column {
        Some(LabelColumn::Index(i)) => {
            if *i >= width {
                return Err(Error::InvalidConfig(format!(
                    "label column {i} out of range for {width} columns"
                )));
            }
            Some(*i)
        }
        _ => None,
    };
    let header = match label_column {
        Some(LabelColumn::Name(_)) => true,
        _ => rows[0]
            .1
            .iter()
            .enumerate()
            .any(|(c, cell)| Some(c) != label_idx && !is_number(cell)),
    };
    if let Some(LabelColumn::Name(name)) = label_column {
        let found = rows[0].1.iter().position(|c| c == name);
        label_idx = Some(found.ok_or_else(|| {
            Error::InvalidConfig(format!("label column `{name}` not found in header of {}", path.display()))
        })?);
    }
    let body = if header { &rows[1..] } else { &rows[..] };
    if body.is_empty() {
        return Err(Error::InvalidData(format!("{}: header but no data rows", path.display())));
    }

    let l = width - usize::from(label_idx.is_some());
    if l == 0 {
        return Err(Error::InvalidData(format!("{}: no feature columns", path.display())));
    }
    let mut values = Vec::with_capacity(body.len() * l);
    let mut labels = Vec::with_capacity(body.len());
    let mut codes: HashMap<String, usize> = HashMap::new();
    for (row, rec) in body {
        if rec.len() != width {
            return Err(csv_err(
                *row,
                rec.len().min(width) + 1,
                format!("expected {width} fields, found {}", rec.len()),
            ));
        }
        for (c, cell) in rec.iter().enumerate() {
            if Some(c) == label_idx {
                let next = codes.len() + 1;
                labels.push(*codes.entry(cell.to_string()).or_insert(next));
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| csv_err(*row, c + 1, format!("`{cell}` is not a number")))?;
            if !v.is_finite() {
                return Err(csv_err(*row, c + 1, format!("`{cell}` is not finite")));
            }
            values.push(v);
        }
    }

    let points = Array2::from_shape_vec((body.len(), l), values).expect("rectangular rows");
    let data = DataSet::new(points)?;
    if label_idx.is_some() {
        data.with_labels(labels)
    } else {
        Ok(data)
    }
}

fn write_rows<'a>(
    path: &Path,
    header: Vec<String>,
    rows: impl Iterator<Item = ndarray::ArrayView1<'a, f64>>,
) -> Result<()> {
    let to_io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        other => Error::InvalidData(format!("{}: {other:?}", path.display())),
    };
    let mut w = csv::Writer::from_path(path).map_err(to_io)?;
    w.write_record(&header).map_err(to_io)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(to_io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `N x m` memberships with header `u1,...,um`.
pub fn write_memberships(path: impl AsRef<Path>, u: &MembershipMatrix) -> Result<()> {
    let header = (1..=u.n_clusters()).map(|j| format!("u{j}")).collect();
    write_rows(path.as_ref(), header, u.0.rows().into_iter())
}

/// One representative per row, header `x1,...,xl`.
pub fn write_theta(path: impl AsRef<Path>, theta: &Array2<f64>) -> Result<()> {
    let header = (1..=theta.ncols()).map(|k| format!("x{k}")).collect();
    write_rows(path.as_ref(), header, theta.rows().into_iter())
}
