//! Brute-force reference implementations used to check the library.
//! Each is written independently of the code under test and favors the
//! most literal formulation over speed.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

/// Levenshtein distance from the full (n+1) x (m+1) table.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (n, m) = (a.len(), b.len());
    let mut t = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        t[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = t[i - 1][j - 1] + if a[i - 1] == b[j - 1] { 0 } else { 1 };
            t[i][j] = sub.min(t[i - 1][j] + 1).min(t[i][j - 1] + 1);
        }
    }
    t[n][m]
}

pub fn normalized_edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> f64 {
    let m = a.len().max(b.len());
    if m == 0 {
        0.0
    } else {
        edit_distance(a, b) as f64 / m as f64
    }
}

fn count_of(word: &str, tokens: &[String]) -> usize {
    let mut c = 0;
    for t in tokens {
        if t == word {
            c += 1;
        }
    }
    c
}

/// BLEU-1 by counting each distinct candidate word against every reference.
pub fn bleu1(candidate: &[String], references: &[Vec<String>]) -> f64 {
    if candidate.is_empty() || references.is_empty() {
        return 0.0;
    }
    let mut seen: Vec<&String> = Vec::new();
    let mut clipped = 0;
    for w in candidate {
        if seen.contains(&w) {
            continue;
        }
        seen.push(w);
        let mut max_ref = 0;
        for r in references {
            max_ref = max_ref.max(count_of(w, r));
        }
        clipped += count_of(w, candidate).min(max_ref);
    }
    let c = candidate.len();
    let mut r = references[0].len();
    for reference in references {
        let l = reference.len();
        let d_new = (l as i64 - c as i64).abs();
        let d_old = (r as i64 - c as i64).abs();
        if d_new < d_old || (d_new == d_old && l < r) {
            r = l;
        }
    }
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    clipped as f64 / c as f64 * bp
}

fn ngram_strings(tokens: &[String], n: usize) -> Vec<String> {
    if tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n).map(|i| tokens[i..i + n].join("\u{1}")).collect()
}

fn tf(grams: &[String]) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    for g in grams {
        *m.entry(g.clone()).or_insert(0.0) += 1.0;
    }
    m
}

fn cosine_maps(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let mut dot = 0.0;
    for (k, x) in a {
        if let Some(y) = b.get(k) {
            dot += x * y;
        }
    }
    let na: f64 = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// CIDEr item scores: for n = 1..4, tf-idf vectors with idf ln(N / df) where
/// df counts items whose references contain the n-gram; score_n is the mean
/// cosine of the candidate against each reference; item = 10 * mean_n.
pub fn cider_items(items: &[(Vec<String>, Vec<Vec<String>>)]) -> Vec<f64> {
    let n_items = items.len() as f64;
    let mut scores = vec![0.0; items.len()];
    for n in 1..=4 {
        let mut df: BTreeMap<String, f64> = BTreeMap::new();
        for (_, refs) in items {
            let mut grams: Vec<String> = refs.iter().flat_map(|r| ngram_strings(r, n)).collect();
            grams.sort();
            grams.dedup();
            for g in grams {
                *df.entry(g).or_insert(0.0) += 1.0;
            }
        }
        let weigh = |m: BTreeMap<String, f64>| -> BTreeMap<String, f64> {
            m.into_iter()
                .map(|(g, c)| {
                    let d = df.get(&g).copied().unwrap_or(0.0).max(1.0);
                    (g, c * (n_items / d).ln())
                })
                .collect()
        };
        for (i, (cand, refs)) in items.iter().enumerate() {
            let cv = weigh(tf(&ngram_strings(cand, n)));
            let mut s = 0.0;
            for r in refs {
                s += cosine_maps(&cv, &weigh(tf(&ngram_strings(r, n))));
            }
            scores[i] += s / refs.len() as f64;
        }
    }
    scores.into_iter().map(|s| s * 10.0 / 4.0).collect()
}

/// IoU of integer-cornered axis-aligned boxes `[lo, hi)` per axis, computed
/// with integer volumes.
pub fn iou_integer(a: ([i64; 3], [i64; 3]), b: ([i64; 3], [i64; 3])) -> f64 {
    let vol = |lo: [i64; 3], hi: [i64; 3]| (0..3).map(|d| (hi[d] - lo[d]) as i128).product::<i128>();
    let mut inter: i128 = 1;
    for d in 0..3 {
        let o = a.1[d].min(b.1[d]) - a.0[d].max(b.0[d]);
        if o <= 0 {
            return 0.0;
        }
        inter *= o as i128;
    }
    let union = vol(a.0, a.1) + vol(b.0, b.1) - inter;
    inter as f64 / union as f64
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Dot product in doubled working precision (compensated summation of
/// exact products).
pub fn dot2(u: &[f64], v: &[f64]) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        let (p, pe) = two_prod(*a, *b);
        let (t, te) = two_sum(s, p);
        s = t;
        c += pe + te;
    }
    s + c
}

pub fn cosine_precise(u: &[f64], v: &[f64]) -> f64 {
    dot2(u, v) / (dot2(u, u).sqrt() * dot2(v, v).sqrt())
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues with their eigenvectors as columns.
pub fn jacobi_eigen(m: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i][i]).collect();
    let vectors = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    (values, vectors)
}

/// Sample covariance (N - 1) of the rows of `x`.
pub fn covariance(x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = x.len();
    let d = x[0].len();
    let mean: Vec<f64> = (0..d).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let mut c = vec![vec![0.0; d]; d];
    for r in x {
        for i in 0..d {
            for j in 0..d {
                c[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]);
            }
        }
    }
    for row in c.iter_mut() {
        for v in row.iter_mut() {
            *v /= n as f64 - 1.0;
        }
    }
    c
}

/// Top-two principal axes from the Jacobi oracle, each flipped so its
/// largest-magnitude entry is positive.
pub fn top2_axes(x: &[Vec<f64>]) -> ([f64; 2], [Vec<f64>; 2]) {
    let (vals, vecs) = jacobi_eigen(&covariance(x));
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap());
    let fix = |mut v: Vec<f64>| {
        let big = v.iter().cloned().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    };
    ([vals[idx[0]], vals[idx[1]]], [fix(vecs[idx[0]].clone()), fix(vecs[idx[1]].clone())])
}

/// TF-IDF by first counting a term/document table, then weighting with the
/// smoothed idf and normalizing rows.
pub fn tfidf(docs: &[Vec<String>], min_df: usize) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut vocab: Vec<String> = docs.iter().flatten().cloned().collect();
    vocab.sort();
    vocab.dedup();
    let df = |t: &String| docs.iter().filter(|d| d.contains(t)).count();
    vocab.retain(|t| df(t) >= min_df);
    let n = docs.len() as f64;
    let rows = docs
        .iter()
        .map(|d| {
            let mut row: Vec<f64> = vocab
                .iter()
                .map(|t| {
                    let count = d.iter().filter(|x| *x == t).count() as f64;
                    count * (((1.0 + n) / (1.0 + df(t) as f64)).ln() + 1.0)
                })
                .collect();
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.iter_mut().for_each(|x| *x /= norm);
            }
            row
        })
        .collect();
    (vocab, rows)
}

/// Largest-remainder quotas for `sizes * p / q` with integer remainders;
/// ties go to the earlier group.
pub fn largest_remainder_exact(sizes: &[usize], p: usize, q: usize, total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = sizes.iter().map(|s| s * p / q).collect();
    let mut order: Vec<(usize, usize)> = sizes.iter().enumerate().map(|(i, s)| (s * p % q, i)).collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut left = total - counts.iter().sum::<usize>();
    for (_, i) in order {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

/// Small deterministic generator for test inputs (SplitMix64).
pub struct Gen(pub u64);

impl Gen {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn words(&mut self, alphabet: &[&str], max_len: u64) -> Vec<String> {
        let len = self.below(max_len + 1);
        (0..len).map(|_| alphabet[self.below(alphabet.len() as u64) as usize].to_string()).collect()
    }
}
