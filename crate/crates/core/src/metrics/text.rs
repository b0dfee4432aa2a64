use std::collections::{BTreeMap, HashMap, HashSet};

use super::MetricsError;

/// Lowercases, replaces punctuation with spaces and collapses whitespace.
pub fn normalize_answer(text: &str) -> String {
    let cleaned: String = text
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() || c.is_whitespace() { c } else { ' ' })
        .collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Whitespace tokens of the normalized text.
pub fn answer_tokens(text: &str) -> Vec<String> {
    normalize_answer(text).split(' ').filter(|t| !t.is_empty()).map(str::to_string).collect()
}

fn counts<S: AsRef<str>>(tokens: &[S]) -> HashMap<&str, usize> {
    let mut m = HashMap::new();
    for t in tokens {
        *m.entry(t.as_ref()).or_insert(0) += 1;
    }
    m
}

/// Length of the reference closest to `c`; ties go to the shorter one.
fn closest_ref_len<S: AsRef<str>>(c: usize, references: &[Vec<S>]) -> usize {
    references
        .iter()
        .map(Vec::len)
        .min_by_key(|&r| (r.abs_diff(c), r))
        .unwrap_or(0)
}

/// Sentence-level BLEU with unigrams only: clipped precision times the
/// brevity penalty. An empty candidate or reference list scores 0.
pub fn bleu1<S: AsRef<str>, R: AsRef<str>>(candidate: &[S], references: &[Vec<R>]) -> f64 {
    if candidate.is_empty() || references.is_empty() {
        return 0.0;
    }
    let (clipped, c) = clipped_matches(candidate, references);
    let r = closest_ref_len(c, references);
    clipped as f64 / c as f64 * brevity_penalty(c, r)
}

fn clipped_matches<S: AsRef<str>, R: AsRef<str>>(candidate: &[S], references: &[Vec<R>]) -> (usize, usize) {
    let mut max_ref: HashMap<&str, usize> = HashMap::new();
    for r in references {
        for (w, n) in counts(r) {
            let e = max_ref.entry(w).or_insert(0);
            *e = (*e).max(n);
        }
    }
    let clipped = counts(candidate).into_iter().map(|(w, n)| n.min(max_ref.get(w).copied().unwrap_or(0))).sum();
    (clipped, candidate.len())
}

fn brevity_penalty(c: usize, r: usize) -> f64 {
    if c == 0 {
        0.0
    } else if c > r {
        1.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

/// Corpus BLEU-1: clipped counts and lengths pooled over items before the
/// precision and brevity penalty are taken.
pub fn corpus_bleu1<S: AsRef<str>, R: AsRef<str>>(items: &[(Vec<S>, Vec<Vec<R>>)]) -> f64 {
    let (mut clipped, mut c, mut r) = (0usize, 0usize, 0usize);
    for (cand, refs) in items {
        if cand.is_empty() || refs.is_empty() {
            r += closest_ref_len(0, refs);
            continue;
        }
        let (m, len) = clipped_matches(cand, refs);
        clipped += m;
        c += len;
        r += closest_ref_len(len, refs);
    }
    if c == 0 {
        return 0.0;
    }
    clipped as f64 / c as f64 * brevity_penalty(c, r)
}

pub const CIDER_MAX_N: usize = 4;

// Ordered so identical vectors accumulate their norms and dot product in
// the same order.
type NgramCounts = BTreeMap<Vec<String>, f64>;

fn ngrams<S: AsRef<str>>(tokens: &[S], n: usize) -> NgramCounts {
    let mut m = BTreeMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *m.entry(w.iter().map(|t| t.as_ref().to_string()).collect()).or_insert(0.0) += 1.0;
        }
    }
    m
}

fn weighted(counts: &NgramCounts, df: &HashMap<Vec<String>, usize>, log_n: f64) -> NgramCounts {
    counts
        .iter()
        .map(|(g, &tf)| {
            let d = df.get(g).copied().unwrap_or(0).max(1) as f64;
            (g.clone(), tf * (log_n - d.ln()))
        })
        .collect()
}

fn cosine_sparse(a: &NgramCounts, b: &NgramCounts) -> f64 {
    let na: f64 = a.values().map(|x| x * x).sum();
    let nb: f64 = b.values().map(|x| x * x).sum();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.iter().map(|(g, x)| x * b.get(g).copied().unwrap_or(0.0)).sum();
    dot / (na * nb).sqrt()
}

/// Per-item CIDEr scores, keyed like the inputs.
///
/// For each n in 1..=4 an item's candidate and each reference become TF-IDF
/// vectors with idf `ln(N / df)`, where `df` counts the items whose reference
/// set contains the n-gram. `score_n` is the mean cosine against the
/// references; the item score is 10 times the mean of the four `score_n`.
pub fn cider_items(
    candidates: &BTreeMap<String, Vec<String>>,
    references: &BTreeMap<String, Vec<Vec<String>>>,
) -> Result<BTreeMap<String, f64>, MetricsError> {
    if candidates.len() != references.len() || candidates.keys().any(|k| !references.contains_key(k)) {
        let missing: Vec<String> = references.keys().filter(|k| !candidates.contains_key(*k)).cloned().collect();
        let extra: Vec<String> = candidates.keys().filter(|k| !references.contains_key(*k)).cloned().collect();
        return Err(MetricsError::IdMismatch { missing, extra });
    }
    let n_items = candidates.len();
    if n_items < 2 {
        return Err(MetricsError::CorpusTooSmall(n_items));
    }
    let log_n = (n_items as f64).ln();
    let mut scores: BTreeMap<String, f64> = candidates.keys().map(|k| (k.clone(), 0.0)).collect();
    for n in 1..=CIDER_MAX_N {
        let mut df: HashMap<Vec<String>, usize> = HashMap::new();
        let ref_counts: BTreeMap<&String, Vec<NgramCounts>> =
            references.iter().map(|(k, refs)| (k, refs.iter().map(|r| ngrams(r, n)).collect())).collect();
        for refs in ref_counts.values() {
            let seen: HashSet<&Vec<String>> = refs.iter().flat_map(|r| r.keys()).collect();
            for g in seen {
                *df.entry(g.clone()).or_insert(0) += 1;
            }
        }
        for (id, cand) in candidates {
            let refs = &ref_counts[id];
            if refs.is_empty() {
                continue;
            }
            let c = weighted(&ngrams(cand, n), &df, log_n);
            let total: f64 = refs.iter().map(|r| cosine_sparse(&c, &weighted(r, &df, log_n))).sum();
            *scores.get_mut(id).expect("same keys") += total / refs.len() as f64;
        }
    }
    for v in scores.values_mut() {
        *v = *v / CIDER_MAX_N as f64 * 10.0;
    }
    Ok(scores)
}

/// Corpus CIDEr: the mean of the item scores.
pub fn cider(
    candidates: &BTreeMap<String, Vec<String>>,
    references: &BTreeMap<String, Vec<Vec<String>>>,
) -> Result<f64, MetricsError> {
    let items = cider_items(candidates, references)?;
    Ok(items.values().sum::<f64>() / items.len() as f64)
}
