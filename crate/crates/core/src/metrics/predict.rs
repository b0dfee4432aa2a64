use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::corpus::{Box3D, DatasetSplit, Record, TaskKind};

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Box(Box3D),
    SelectedIndex(i64),
    RankedAnswers(Vec<String>),
    GeneratedText(String),
}

impl Payload {
    pub fn key(&self) -> &'static str {
        match self {
            Payload::Box(_) => "box",
            Payload::SelectedIndex(_) => "selected_index",
            Payload::RankedAnswers(_) => "ranked_answers",
            Payload::GeneratedText(_) => "generated_text",
        }
    }

    pub fn fits(&self, task: TaskKind) -> bool {
        matches!(
            (self, task),
            (Payload::Box(_), TaskKind::GroundingPredBox)
                | (Payload::SelectedIndex(_), TaskKind::GroundingGtCandidates)
                | (Payload::RankedAnswers(_) | Payload::GeneratedText(_), TaskKind::Qa)
        )
    }
}

/// A model output for one record: `{"record_id": ..., <payload key>: ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PredictionLine", into = "PredictionLine")]
pub struct Prediction {
    pub record_id: String,
    pub payload: Payload,
}

impl Prediction {
    pub fn new(record_id: impl Into<String>, payload: Payload) -> Self {
        Self { record_id: record_id.into(), payload }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredictionLine {
    record_id: String,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    bbox: Option<Box3D>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    selected_index: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ranked_answers: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generated_text: Option<String>,
}

impl TryFrom<PredictionLine> for Prediction {
    type Error = String;

    fn try_from(l: PredictionLine) -> Result<Self, String> {
        let mut payloads = Vec::new();
        payloads.extend(l.bbox.map(Payload::Box));
        payloads.extend(l.selected_index.map(Payload::SelectedIndex));
        payloads.extend(l.ranked_answers.map(Payload::RankedAnswers));
        payloads.extend(l.generated_text.map(Payload::GeneratedText));
        match payloads.len() {
            1 => Ok(Prediction { record_id: l.record_id, payload: payloads.pop().expect("one payload") }),
            0 => Err(format!("prediction `{}` has no payload key", l.record_id)),
            _ => Err(format!("prediction `{}` has more than one payload key", l.record_id)),
        }
    }
}

impl From<Prediction> for PredictionLine {
    fn from(p: Prediction) -> Self {
        let mut l = PredictionLine { record_id: p.record_id, bbox: None, selected_index: None, ranked_answers: None, generated_text: None };
        match p.payload {
            Payload::Box(b) => l.bbox = Some(b),
            Payload::SelectedIndex(i) => l.selected_index = Some(i),
            Payload::RankedAnswers(a) => l.ranked_answers = Some(a),
            Payload::GeneratedText(t) => l.generated_text = Some(t),
        }
        l
    }
}

pub fn load_predictions(path: impl AsRef<Path>) -> Result<Vec<Prediction>, MetricsError> {
    let path = path.as_ref();
    let io = |e: std::io::Error| MetricsError::Io(format!("{}: {e}", path.display()));
    let reader = BufReader::new(File::open(path).map_err(io)?);
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        let p: Prediction =
            serde_json::from_str(&line).map_err(|e| MetricsError::Parse { line: idx + 1, message: e.to_string() })?;
        out.push(p);
    }
    Ok(out)
}

pub fn save_predictions(preds: &[Prediction], path: impl AsRef<Path>) -> Result<(), MetricsError> {
    let path = path.as_ref();
    let io = |e: std::io::Error| MetricsError::Io(format!("{}: {e}", path.display()));
    let mut f = std::io::BufWriter::new(File::create(path).map_err(io)?);
    for p in preds {
        writeln!(f, "{}", serde_json::to_string(p).expect("prediction serializes")).map_err(io)?;
    }
    f.flush().map_err(io)
}

/// Pairs every record with its prediction, in split order. Each record needs
/// exactly one prediction whose payload fits its task kind.
pub fn match_predictions<'a>(preds: &'a [Prediction], split: &'a DatasetSplit) -> Result<Vec<(&'a Record, &'a Prediction)>, MetricsError> {
    let mut by_id: HashMap<&str, &Prediction> = HashMap::with_capacity(preds.len());
    for p in preds {
        if by_id.insert(p.record_id.as_str(), p).is_some() {
            return Err(MetricsError::DuplicatePrediction(p.record_id.clone()));
        }
    }
    let ids: HashSet<&str> = split.ids().collect();
    let mut missing = Vec::new();
    let mut out = Vec::with_capacity(split.len());
    for r in &split.records {
        match by_id.get(r.id.as_str()) {
            Some(p) if !p.payload.fits(r.task_kind) => {
                return Err(MetricsError::PayloadMismatch { id: r.id.clone(), payload: p.payload.key(), task_kind: r.task_kind })
            }
            Some(p) => out.push((r, *p)),
            None => missing.push(r.id.clone()),
        }
    }
    let mut extra: Vec<String> = preds.iter().filter(|p| !ids.contains(p.record_id.as_str())).map(|p| p.record_id.clone()).collect();
    if !missing.is_empty() || !extra.is_empty() {
        extra.sort();
        return Err(MetricsError::IdMismatch { missing, extra });
    }
    Ok(out)
}
