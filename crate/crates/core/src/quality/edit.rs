use serde::{Deserialize, Serialize};

/// Levenshtein distance with unit costs over any comparable sequence.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let next = (row[j] + 1).min(row[j + 1] + 1).min(diag + usize::from(x != y));
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[b.len()]
}

/// Levenshtein distance divided by the longer length; 0 when both are empty.
pub fn normalized_edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 0.0;
    }
    levenshtein(a, b) as f64 / longest as f64
}

/// Unit the edit distance is computed over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditGranularity {
    /// Word tokens from the toolkit tokenizer, punctuation dropped.
    #[default]
    Token,
    /// Unicode scalar values of the lowercased sentence.
    Char,
}

impl EditGranularity {
    pub fn describe(self) -> &'static str {
        match self {
            EditGranularity::Token => "token-level Levenshtein / max token count (lowercased, punctuation dropped)",
            EditGranularity::Char => "character-level Levenshtein / max character count (lowercased)",
        }
    }

    pub fn distance(self, a: &str, b: &str) -> f64 {
        match self {
            EditGranularity::Token => {
                normalized_edit_distance(&crate::diversity::word_tokens(a), &crate::diversity::word_tokens(b))
            }
            EditGranularity::Char => {
                let a: Vec<char> = a.to_lowercase().chars().collect();
                let b: Vec<char> = b.to_lowercase().chars().collect();
                normalized_edit_distance(&a, &b)
            }
        }
    }
}
