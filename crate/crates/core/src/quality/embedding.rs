use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::QualityError;

/// Static word vectors loaded from the plain-text `word v1 ... vd` format.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
    case_fold: bool,
}

impl EmbeddingTable {
    pub fn new(dim: usize, case_fold: bool) -> Self {
        Self { dim, vectors: HashMap::new(), case_fold }
    }

    pub fn insert(&mut self, word: &str, vector: Vec<f64>) -> Result<(), QualityError> {
        if vector.len() != self.dim {
            return Err(QualityError::Dimension { expected: self.dim, got: vector.len() });
        }
        let key = if self.case_fold { word.to_lowercase() } else { word.to_string() };
        self.vectors.entry(key).or_insert(vector);
        Ok(())
    }

    /// Reads a table; the dimension is taken from the first line. When case
    /// folding, the first vector seen for a folded word wins.
    pub fn load(path: impl AsRef<Path>, case_fold: bool) -> Result<Self, QualityError> {
        let path = path.as_ref();
        let io = |e: std::io::Error| QualityError::Table(format!("{}: {e}", path.display()));
        let reader = BufReader::new(File::open(path).map_err(io)?);
        let mut table: Option<EmbeddingTable> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(io)?;
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let values: Result<Vec<f64>, _> = parts.map(str::parse::<f64>).collect();
            let values = values.map_err(|e| QualityError::Table(format!("line {}: {e}", idx + 1)))?;
            let t = table.get_or_insert_with(|| EmbeddingTable::new(values.len(), case_fold));
            if values.is_empty() || values.len() != t.dim {
                return Err(QualityError::Table(format!(
                    "line {}: expected {} values, found {}",
                    idx + 1,
                    t.dim,
                    values.len()
                )));
            }
            t.insert(word, values)?;
        }
        table.ok_or_else(|| QualityError::Table(format!("{}: no vectors", path.display())))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `None` signals an out-of-vocabulary word.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        if self.case_fold {
            self.vectors.get(&word.to_lowercase()).map(Vec::as_slice)
        } else {
            self.vectors.get(word).map(Vec::as_slice)
        }
    }
}

/// Mean of in-vocabulary word vectors and the number of OOV tokens skipped.
pub fn sentence_vector_static<S: AsRef<str>>(tokens: &[S], table: &EmbeddingTable) -> Result<(Vec<f64>, usize), QualityError> {
    let mut sum = vec![0.0; table.dim()];
    let mut found = 0usize;
    for t in tokens {
        if let Some(v) = table.get(t.as_ref()) {
            sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
            found += 1;
        }
    }
    if found == 0 {
        return Err(QualityError::AllOov);
    }
    sum.iter_mut().for_each(|s| *s /= found as f64);
    Ok((sum, tokens.len() - found))
}

/// Cosine similarity clamped to [-1, 1].
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, QualityError> {
    if u.len() != v.len() {
        return Err(QualityError::Dimension { expected: u.len(), got: v.len() });
    }
    let (mut dot, mut uu, mut vv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    if uu == 0.0 || vv == 0.0 {
        return Err(QualityError::ZeroNorm);
    }
    Ok((dot / (uu * vv).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn table() -> EmbeddingTable {
        let mut t = EmbeddingTable::new(2, true);
        t.insert("chair", vec![1.0, 0.0]).unwrap();
        t.insert("Table", vec![0.0, 2.0]).unwrap();
        t
    }

    #[test]
    fn mean_vectors() {
        let t = table();
        assert_eq!(sentence_vector_static(&["chair"], &t).unwrap(), (vec![1.0, 0.0], 0));
        assert_eq!(sentence_vector_static(&["chair", "TABLE"], &t).unwrap(), (vec![0.5, 1.0], 0));
        assert_eq!(sentence_vector_static(&["the", "chair", "xyz"], &t).unwrap(), (vec![1.0, 0.0], 2));
        assert!(matches!(sentence_vector_static(&["the"], &t), Err(QualityError::AllOov)));
    }

    #[test]
    fn cosine_basics() {
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let v = [0.3, -1.7, 2.2];
        assert!((cosine(&v, &v).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(cosine(&[0.0, 0.0], &[1.0, 0.0]), Err(QualityError::ZeroNorm)));
        assert!(cosine(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn loads_text_format() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "the 0.1 0.2 0.3\nChair 1 2 3\n\nchair 9 9 9").unwrap();
        let t = EmbeddingTable::load(f.path(), true).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.get("CHAIR"), Some(&[1.0, 2.0, 3.0][..]));

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        writeln!(bad, "a 1 2\nb 1").unwrap();
        assert!(EmbeddingTable::load(bad.path(), true).is_err());
    }
}
