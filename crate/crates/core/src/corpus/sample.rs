use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CorpusError, DatasetSplit, StratumKey, DEFAULT_DIFFICULTY_THRESHOLD};

/// Seeded generator used for every randomized corpus step. ChaCha8 output is
/// specified independently of platform and word size, so a seed reproduces
/// the same split everywhere.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsampleOptions {
    pub fraction: f64,
    pub stratify: bool,
    pub seed: u64,
    pub difficulty_threshold: u32,
}

impl SubsampleOptions {
    pub fn new(fraction: f64, stratify: bool, seed: u64) -> Self {
        Self { fraction, stratify, seed, difficulty_threshold: DEFAULT_DIFFICULTY_THRESHOLD }
    }
}

/// Number of items kept from `n` at `fraction`, rounded half away from zero.
pub fn target_count(n: usize, fraction: f64) -> usize {
    ((n as f64) * fraction).round() as usize
}

/// Largest-remainder apportionment of `total` across groups proportional to
/// `sizes`. Ties in the fractional part go to the earlier group.
pub fn largest_remainder(sizes: &[usize], fraction: f64, total: usize) -> Vec<usize> {
    let exact: Vec<f64> = sizes.iter().map(|&s| s as f64 * fraction).collect();
    let mut counts: Vec<usize> = exact
        .iter()
        .zip(sizes)
        .map(|(e, &s)| (e.floor() as usize).min(s))
        .collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let mut remaining = total.saturating_sub(assigned);
    while remaining > 0 {
        let before = remaining;
        for &g in &order {
            if remaining == 0 {
                break;
            }
            if counts[g] < sizes[g] {
                counts[g] += 1;
                remaining -= 1;
            }
        }
        if before == remaining {
            break;
        }
    }
    counts
}

/// Draws `fraction` of the split, optionally stratified by difficulty and
/// view. Selected records keep their original relative order.
pub fn subsample(split: &DatasetSplit, fraction: f64, stratify: bool, seed: u64) -> Result<DatasetSplit, CorpusError> {
    subsample_with(split, &SubsampleOptions::new(fraction, stratify, seed))
}

pub fn subsample_with(split: &DatasetSplit, opts: &SubsampleOptions) -> Result<DatasetSplit, CorpusError> {
    if split.is_empty() {
        return Err(CorpusError::EmptySplit);
    }
    if !(opts.fraction > 0.0 && opts.fraction <= 1.0) {
        return Err(CorpusError::InvalidFraction(opts.fraction));
    }
    let n = split.len();
    let total = target_count(n, opts.fraction);
    let mut rng = seeded_rng(opts.seed);

    let mut chosen: Vec<usize> = if opts.stratify {
        // `None` is the catch-all stratum for records without metadata.
        let mut strata: BTreeMap<Option<StratumKey>, Vec<usize>> = BTreeMap::new();
        for (i, r) in split.records.iter().enumerate() {
            let key = r.meta.as_ref().map(|m| StratumKey::from_meta(m, opts.difficulty_threshold));
            strata.entry(key).or_default().push(i);
        }
        if let Some(missing) = strata.get(&None) {
            log::warn!(
                "{} of {} records lack metadata; sampling them as one catch-all stratum",
                missing.len(),
                n
            );
        }
        let sizes: Vec<usize> = strata.values().map(Vec::len).collect();
        let quotas = largest_remainder(&sizes, opts.fraction, total);
        let mut picked = Vec::with_capacity(total);
        for (members, quota) in strata.into_values().zip(quotas) {
            let mut members = members;
            members.shuffle(&mut rng);
            picked.extend(members.into_iter().take(quota));
        }
        picked
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        idx.truncate(total);
        idx
    };
    chosen.sort_unstable();

    Ok(DatasetSplit {
        style: split.style,
        source_dataset: split.source_dataset.clone(),
        records: chosen.into_iter().map(|i| split.records[i].clone()).collect(),
    })
}
