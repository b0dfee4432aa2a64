use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::iou::iou3d;
use super::predict::{match_predictions, Payload, Prediction};
use super::text::{answer_tokens, cider, corpus_bleu1, normalize_answer};
use super::MetricsError;
use crate::corpus::{DatasetSplit, Record, Target};
use crate::Execution;

fn fraction(hits: usize, n: usize) -> Result<f64, MetricsError> {
    if n == 0 {
        return Err(MetricsError::EmptySplit);
    }
    Ok(hits as f64 / n as f64)
}

fn gt_box(r: &Record) -> Result<&crate::corpus::Box3D, MetricsError> {
    match &r.target {
        Target::GtBox { gt_box } => Ok(gt_box),
        _ => Err(MetricsError::TargetMismatch(r.id.clone())),
    }
}

fn answers(r: &Record) -> Result<&[String], MetricsError> {
    match &r.target {
        Target::Answers { answers } => Ok(answers),
        _ => Err(MetricsError::TargetMismatch(r.id.clone())),
    }
}

/// Top-ranked answers of a QA prediction; generated text counts as a single
/// ranked answer.
fn ranked(p: &Prediction) -> Result<Vec<&str>, MetricsError> {
    let list: Vec<&str> = match &p.payload {
        Payload::RankedAnswers(a) => a.iter().map(String::as_str).collect(),
        Payload::GeneratedText(t) => vec![t.as_str()],
        _ => unreachable!("payload checked against task kind"),
    };
    if list.is_empty() {
        return Err(MetricsError::EmptyAnswers(p.record_id.clone()));
    }
    Ok(list)
}

/// Share of records whose predicted box reaches IoU `k` with the ground truth.
pub fn acc_at_kiou(preds: &[Prediction], split: &DatasetSplit, k: f64) -> Result<f64, MetricsError> {
    if !(k > 0.0 && k < 1.0) {
        return Err(MetricsError::InvalidParameter(format!("IoU threshold must be in (0, 1), got {k}")));
    }
    let pairs = match_predictions(preds, split)?;
    let hits = Execution::default().map(&pairs, |(r, p)| -> Result<bool, MetricsError> {
        let Payload::Box(b) = &p.payload else { unreachable!("payload checked against task kind") };
        Ok(iou3d(b, gt_box(r)?) >= k)
    });
    let hits = hits.into_iter().collect::<Result<Vec<_>, _>>()?;
    fraction(hits.iter().filter(|&&h| h).count(), pairs.len())
}

/// Share of records where the selected candidate is the target.
pub fn listening_accuracy(preds: &[Prediction], split: &DatasetSplit) -> Result<f64, MetricsError> {
    let pairs = match_predictions(preds, split)?;
    let mut hits = 0;
    for (r, p) in &pairs {
        let Payload::SelectedIndex(i) = p.payload else { unreachable!("payload checked against task kind") };
        let Target::Candidate { candidate_index, candidate_count } = r.target else {
            return Err(MetricsError::TargetMismatch(r.id.clone()));
        };
        if i < 0 || i as usize >= candidate_count {
            return Err(MetricsError::IndexOutOfRange { id: r.id.clone(), index: i, candidate_count });
        }
        hits += usize::from(i as usize == candidate_index);
    }
    fraction(hits, pairs.len())
}

/// Share of records where one of the top-`k` answers equals a ground-truth
/// answer after normalization.
pub fn exact_match_at_k(preds: &[Prediction], split: &DatasetSplit, k: usize) -> Result<f64, MetricsError> {
    if k == 0 {
        return Err(MetricsError::InvalidParameter("k must be at least 1".into()));
    }
    let pairs = match_predictions(preds, split)?;
    let mut hits = 0;
    for (r, p) in &pairs {
        let gt: Vec<String> = answers(r)?.iter().map(|a| normalize_answer(a)).collect();
        let top = ranked(p)?;
        hits += usize::from(top.iter().take(k).any(|a| gt.contains(&normalize_answer(a))));
    }
    fraction(hits, pairs.len())
}

type TextCorpus = (BTreeMap<String, Vec<String>>, BTreeMap<String, Vec<Vec<String>>>);

fn text_corpus(preds: &[Prediction], split: &DatasetSplit) -> Result<TextCorpus, MetricsError> {
    let mut cands = BTreeMap::new();
    let mut refs = BTreeMap::new();
    for (r, p) in match_predictions(preds, split)? {
        let gt = answers(r)?;
        if gt.is_empty() {
            return Err(MetricsError::EmptyAnswers(r.id.clone()));
        }
        cands.insert(r.id.clone(), answer_tokens(ranked(p)?[0]));
        refs.insert(r.id.clone(), gt.iter().map(|a| answer_tokens(a)).collect());
    }
    Ok((cands, refs))
}

/// Corpus BLEU-1 of the top answer against the ground-truth answers.
pub fn split_bleu1(preds: &[Prediction], split: &DatasetSplit) -> Result<f64, MetricsError> {
    let (cands, refs) = text_corpus(preds, split)?;
    if cands.is_empty() {
        return Err(MetricsError::EmptySplit);
    }
    let items: Vec<(Vec<String>, Vec<Vec<String>>)> = cands.into_iter().map(|(id, c)| (c, refs[&id].clone())).collect();
    Ok(corpus_bleu1(&items))
}

/// Corpus CIDEr of the top answer against the ground-truth answers.
pub fn split_cider(preds: &[Prediction], split: &DatasetSplit) -> Result<f64, MetricsError> {
    let (cands, refs) = text_corpus(preds, split)?;
    cider(&cands, &refs)
}

/// A named task metric, parsed from `acc@0.25`, `acc`, `em@1`, `bleu1`,
/// `cider`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Metric {
    AccAtIou(f64),
    ListeningAccuracy,
    ExactMatch(usize),
    Bleu1,
    Cider,
}

impl Metric {
    pub fn evaluate(&self, preds: &[Prediction], split: &DatasetSplit) -> Result<f64, MetricsError> {
        match *self {
            Metric::AccAtIou(k) => acc_at_kiou(preds, split, k),
            Metric::ListeningAccuracy => listening_accuracy(preds, split),
            Metric::ExactMatch(k) => exact_match_at_k(preds, split, k),
            Metric::Bleu1 => split_bleu1(preds, split),
            Metric::Cider => split_cider(preds, split),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::AccAtIou(k) => write!(f, "acc@{k}"),
            Metric::ListeningAccuracy => f.write_str("acc"),
            Metric::ExactMatch(k) => write!(f, "em@{k}"),
            Metric::Bleu1 => f.write_str("bleu1"),
            Metric::Cider => f.write_str("cider"),
        }
    }
}

impl FromStr for Metric {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || MetricsError::InvalidParameter(format!("unknown metric `{s}`"));
        if let Some(k) = s.strip_prefix("acc@") {
            let k: f64 = k.parse().map_err(|_| bad())?;
            if !(k > 0.0 && k < 1.0) {
                return Err(bad());
            }
            return Ok(Metric::AccAtIou(k));
        }
        if let Some(k) = s.strip_prefix("em@") {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            return Ok(Metric::ExactMatch(k));
        }
        match s.as_str() {
            "acc" => Ok(Metric::ListeningAccuracy),
            "bleu1" | "bleu-1" => Ok(Metric::Bleu1),
            "cider" => Ok(Metric::Cider),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for Metric {
    type Error = MetricsError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Metric> for String {
    fn from(m: Metric) -> Self {
        m.to_string()
    }
}
