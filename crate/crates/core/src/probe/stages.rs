use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::matrix::FeatureMatrix;
use super::ProbeError;
use crate::quality::cosine;
use crate::Execution;

pub const DEFAULT_TAU: f64 = 0.5;
pub const DEFAULT_BINS: usize = 50;

pub const RELATIVE_NOTE: &str =
    "Absolute similarity values depend on the external model and carry no meaning on their own; only the comparison between stages is interpreted.";

/// Row-wise cosine between two exports of the same records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedCosine {
    pub stage_label: String,
    /// `(id, similarity)` in the first matrix's order, zero-norm ids left out.
    pub similarities: Vec<(String, f64)>,
    /// Ids whose row was zero in either matrix.
    pub zero_norm: Vec<String>,
}

impl PairedCosine {
    pub fn values(&self) -> Vec<f64> {
        self.similarities.iter().map(|(_, s)| *s).collect()
    }

    fn all_ids(&self) -> HashSet<&str> {
        self.similarities.iter().map(|(id, _)| id.as_str()).chain(self.zero_norm.iter().map(String::as_str)).collect()
    }

    /// Keeps only the listed ids, for restricting a probe to failure cases.
    pub fn retain_ids(&mut self, keep: &HashSet<String>) {
        self.similarities.retain(|(id, _)| keep.contains(id));
        self.zero_norm.retain(|id| keep.contains(id));
    }
}

pub fn paired_cosine(a: &FeatureMatrix, b: &FeatureMatrix) -> Result<PairedCosine, ProbeError> {
    paired_cosine_with(a, b, Execution::default())
}

pub fn paired_cosine_with(a: &FeatureMatrix, b: &FeatureMatrix, exec: Execution) -> Result<PairedCosine, ProbeError> {
    if a.dim() != b.dim() {
        return Err(ProbeError::Shape(format!("dimensions differ: {} vs {}", a.dim(), b.dim())));
    }
    let b_index: std::collections::HashMap<&str, usize> = b.ids().iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let a_ids: HashSet<&str> = a.ids().iter().map(String::as_str).collect();
    let missing: Vec<String> = a.ids().iter().filter(|id| !b_index.contains_key(id.as_str())).cloned().collect();
    let extra: Vec<String> = b.ids().iter().filter(|id| !a_ids.contains(id.as_str())).cloned().collect();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(ProbeError::IdMismatch { missing, extra });
    }
    let sims = exec.map_range(a.len(), |i| cosine(&a.rows()[i], &b.rows()[b_index[a.ids()[i].as_str()]]).ok());
    let mut out = PairedCosine { stage_label: a.stage_label.clone(), similarities: Vec::new(), zero_norm: Vec::new() };
    for (id, s) in a.ids().iter().zip(sims) {
        match s {
            Some(s) => out.similarities.push((id.clone(), s)),
            None => {
                log::warn!("{}: zero-norm row for `{id}`, excluded", a.stage_label);
                out.zero_norm.push(id.clone());
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub stage_label: String,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub fraction_below: f64,
}

pub fn stage_stats(p: &PairedCosine, tau: f64) -> Result<StageStats, ProbeError> {
    let mut v = p.values();
    if v.is_empty() {
        return Err(ProbeError::EmptyValues);
    }
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    v.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 };
    let below = v.iter().filter(|&&x| x < tau).count();
    Ok(StageStats { stage_label: p.stage_label.clone(), n, mean, median, fraction_below: below as f64 / n as f64 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub tau: f64,
    pub bins: usize,
    pub pre: StageStats,
    pub post: StageStats,
    /// `post.mean - pre.mean`.
    pub mean_shift: f64,
    /// `post.fraction_below - pre.fraction_below`.
    pub mass_shift_below_tau: f64,
    pub zero_norm_ids: Vec<String>,
    pub note: String,
}

pub fn compare_stages(pre: &PairedCosine, post: &PairedCosine, tau: f64, bins: usize) -> Result<ProbeReport, ProbeError> {
    let (a, b) = (pre.all_ids(), post.all_ids());
    if a != b {
        let mut missing: Vec<String> = a.difference(&b).map(|s| s.to_string()).collect();
        let mut extra: Vec<String> = b.difference(&a).map(|s| s.to_string()).collect();
        missing.sort();
        extra.sort();
        return Err(ProbeError::IdMismatch { missing, extra });
    }
    let pre_s = stage_stats(pre, tau)?;
    let post_s = stage_stats(post, tau)?;
    let mut zero: Vec<String> = pre.zero_norm.iter().chain(&post.zero_norm).cloned().collect();
    zero.sort();
    zero.dedup();
    Ok(ProbeReport {
        tau,
        bins,
        mean_shift: post_s.mean - pre_s.mean,
        mass_shift_below_tau: post_s.fraction_below - pre_s.fraction_below,
        pre: pre_s,
        post: post_s,
        zero_norm_ids: zero,
        note: RELATIVE_NOTE.to_string(),
    })
}
