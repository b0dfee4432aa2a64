use std::collections::HashSet;
use std::path::Path;

use super::ProbeError;

/// Per-record feature vectors exported by an external model at one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub stage_label: String,
    ids: Vec<String>,
    rows: Vec<Vec<f64>>,
    dim: usize,
}

impl FeatureMatrix {
    pub fn new(stage_label: impl Into<String>, ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, ProbeError> {
        if ids.len() != rows.len() {
            return Err(ProbeError::Shape(format!("{} ids for {} rows", ids.len(), rows.len())));
        }
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || dim == 0 {
            return Err(ProbeError::Empty);
        }
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(ProbeError::Ragged { line: i + 2, expected: dim, got: rows[i].len() });
        }
        let mut seen = HashSet::with_capacity(ids.len());
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(ProbeError::DuplicateId(id.clone()));
            }
        }
        Ok(Self { stage_label: stage_label.into(), ids, rows, dim })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn row(&self, id: &str) -> Option<&[f64]> {
        self.ids.iter().position(|i| i == id).map(|i| self.rows[i].as_slice())
    }
}

/// Reads a CSV whose header's first cell is the stage label and whose rows
/// are `id, v1, ..., vd`.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<FeatureMatrix, ProbeError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| ProbeError::Io(format!("{}: {e}", path.display())))?;
    let mut records = reader.records();
    let header = match records.next() {
        Some(h) => h.map_err(|e| ProbeError::Io(e.to_string()))?,
        None => return Err(ProbeError::Empty),
    };
    let stage_label = header.get(0).unwrap_or("").trim().to_string();
    let width = header.len();
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| ProbeError::Io(e.to_string()))?;
        if rec.len() == 1 && rec.get(0).is_some_and(|c| c.trim().is_empty()) {
            continue;
        }
        if rec.len() != width {
            return Err(ProbeError::Ragged { line, expected: width - 1, got: rec.len().saturating_sub(1) });
        }
        let mut row = Vec::with_capacity(width - 1);
        for (col, cell) in rec.iter().enumerate().skip(1) {
            let v: f64 = cell.trim().parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| ProbeError::NonNumeric {
                line,
                column: col + 1,
                value: cell.to_string(),
            })?;
            row.push(v);
        }
        ids.push(rec[0].trim().to_string());
        rows.push(row);
    }
    FeatureMatrix::new(stage_label, ids, rows)
}

/// Writes the matrix in the format `load_matrix` reads. Values use the
/// shortest representation that parses back to the same float.
pub fn write_matrix(m: &FeatureMatrix, path: impl AsRef<Path>) -> Result<(), ProbeError> {
    let path = path.as_ref();
    let err = |e: csv::Error| ProbeError::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    let mut header = vec![m.stage_label.clone()];
    header.extend((1..=m.dim).map(|i| format!("f{i}")));
    w.write_record(&header).map_err(err)?;
    for (id, row) in m.ids.iter().zip(&m.rows) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(err)?;
    }
    w.flush().map_err(|e| ProbeError::Io(format!("{}: {e}", path.display())))
}
