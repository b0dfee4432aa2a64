use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::diversity::tokenize;

/// Axis-aligned 3D box, center and extents in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box3D {
    pub center: [f64; 3],
    pub size: [f64; 3],
}

impl Box3D {
    pub fn new(center: [f64; 3], size: [f64; 3]) -> Self {
        Self { center, size }
    }

    pub fn is_valid(&self) -> bool {
        self.size.iter().all(|s| s.is_finite() && *s > 0.0) && self.center.iter().all(|c| c.is_finite())
    }

    pub fn min_corner(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.center[i] - self.size[i] / 2.0)
    }

    pub fn max_corner(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.center[i] + self.size[i] / 2.0)
    }

    pub fn volume(&self) -> f64 {
        self.size.iter().product()
    }
}

/// The five rephrasing operators plus the unaltered source style.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantStyle {
    Original,
    Syntax,
    Voice,
    Modifier,
    Accent,
    Tone,
}

impl VariantStyle {
    /// The five generated styles, in reporting order.
    pub const VARIANTS: [VariantStyle; 5] = [
        VariantStyle::Syntax,
        VariantStyle::Voice,
        VariantStyle::Modifier,
        VariantStyle::Accent,
        VariantStyle::Tone,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VariantStyle::Original => "original",
            VariantStyle::Syntax => "syntax",
            VariantStyle::Voice => "voice",
            VariantStyle::Modifier => "modifier",
            VariantStyle::Accent => "accent",
            VariantStyle::Tone => "tone",
        }
    }

    pub fn is_variant(self) -> bool {
        self != VariantStyle::Original
    }
}

impl fmt::Display for VariantStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariantStyle {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "original" => Ok(VariantStyle::Original),
            "syntax" => Ok(VariantStyle::Syntax),
            "voice" => Ok(VariantStyle::Voice),
            "modifier" => Ok(VariantStyle::Modifier),
            "accent" => Ok(VariantStyle::Accent),
            "tone" => Ok(VariantStyle::Tone),
            other => Err(CorpusError::UnknownStyle(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    GroundingPredBox,
    GroundingGtCandidates,
    Qa,
}

/// Task target. Serialized untagged, so the JSON object's keys select the
/// variant: `gt_box`, `candidate_index`/`candidate_count`, or `answers`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    GtBox { gt_box: Box3D },
    Candidate { candidate_index: usize, candidate_count: usize },
    Answers { answers: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub object_noun_count: u32,
    pub view_dependent: bool,
}

/// Where a sentence came from when it was not in the source corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attempts: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flagged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<bool>,
    /// Style of the split a record was drawn from, set on augmented training
    /// splits that mix styles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_style: Option<VariantStyle>,
}

/// One instruction item: a sentence and its task target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub dataset_id: String,
    pub scene_id: String,
    pub sentence: String,
    #[serde(default)]
    pub tokens: Vec<String>,
    pub task_kind: TaskKind,
    pub target: Target,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<RecordMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl Record {
    /// Builds a record, tokenizing `sentence` with the toolkit tokenizer.
    pub fn new(
        id: impl Into<String>,
        dataset_id: impl Into<String>,
        scene_id: impl Into<String>,
        sentence: impl Into<String>,
        task_kind: TaskKind,
        target: Target,
    ) -> Self {
        let sentence = sentence.into();
        Self {
            id: id.into(),
            dataset_id: dataset_id.into(),
            scene_id: scene_id.into(),
            tokens: tokenize(&sentence),
            sentence,
            task_kind,
            target,
            meta: None,
            provenance: None,
        }
    }

    pub fn with_meta(mut self, meta: RecordMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    /// Replaces the sentence and re-tokenizes.
    pub fn set_sentence(&mut self, sentence: impl Into<String>) {
        self.sentence = sentence.into();
        self.tokens = tokenize(&self.sentence);
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let bad = |reason: String| CorpusError::InvalidRecord { id: self.id.clone(), reason };
        if self.id.is_empty() {
            return Err(CorpusError::InvalidRecord { id: String::new(), reason: "empty id".into() });
        }
        match (&self.task_kind, &self.target) {
            (TaskKind::GroundingPredBox, Target::GtBox { gt_box }) => {
                if !gt_box.is_valid() {
                    return Err(bad("box sizes must be positive and finite".into()));
                }
            }
            (TaskKind::GroundingGtCandidates, Target::Candidate { candidate_index, candidate_count }) => {
                if candidate_index >= candidate_count {
                    return Err(bad(format!(
                        "candidate_index {candidate_index} out of range for candidate_count {candidate_count}"
                    )));
                }
            }
            (TaskKind::Qa, Target::Answers { answers }) => {
                if answers.is_empty() {
                    return Err(bad("qa record needs at least one answer".into()));
                }
            }
            (kind, _) => {
                return Err(CorpusError::TargetMismatch { id: self.id.clone(), task_kind: *kind });
            }
        }
        let expected = tokenize(&self.sentence);
        if self.tokens != expected {
            return Err(bad("token list does not match the tokenizer output for the sentence".into()));
        }
        Ok(())
    }
}

/// A style-tagged, ordered collection of records.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub style: VariantStyle,
    pub source_dataset: String,
    pub records: Vec<Record>,
}

impl DatasetSplit {
    pub fn new(style: VariantStyle, source_dataset: impl Into<String>, records: Vec<Record>) -> Self {
        Self { style, source_dataset: source_dataset.into(), records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|r| r.id.as_str())
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen = HashSet::with_capacity(self.records.len());
        for r in &self.records {
            r.validate()?;
            if !seen.insert(r.id.as_str()) {
                return Err(CorpusError::DuplicateId(r.id.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Difficulty {
    Easy,
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum View {
    Dependent,
    Independent,
}

/// Sampling stratum derived from record metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumKey {
    pub difficulty: Difficulty,
    pub view: View,
}

/// Records with more object nouns than this are "hard". The source benchmark
/// names the criterion but not the cut, so this is configurable.
pub const DEFAULT_DIFFICULTY_THRESHOLD: u32 = 2;

impl StratumKey {
    pub fn from_meta(meta: &RecordMeta, difficulty_threshold: u32) -> Self {
        Self {
            difficulty: if meta.object_noun_count > difficulty_threshold {
                Difficulty::Hard
            } else {
                Difficulty::Easy
            },
            view: if meta.view_dependent { View::Dependent } else { View::Independent },
        }
    }
}
