#![allow(dead_code)]

pub mod oracles;

use langrobust::corpus::{Box3D, RecordMeta, TaskKind, Target};
use langrobust::{DatasetSplit, Record, VariantStyle};

pub fn grounding(id: &str, sentence: &str, gt: Box3D) -> Record {
    Record::new(id, "scanrefer", "scene0000_00", sentence, TaskKind::GroundingPredBox, Target::GtBox { gt_box: gt })
}

pub fn listening(id: &str, sentence: &str, index: usize, count: usize) -> Record {
    Record::new(id, "nr3d", "scene0000_00", sentence, TaskKind::GroundingGtCandidates, Target::Candidate {
        candidate_index: index,
        candidate_count: count,
    })
}

pub fn qa(id: &str, sentence: &str, answers: &[&str]) -> Record {
    Record::new(id, "scanqa", "scene0000_00", sentence, TaskKind::Qa, Target::Answers {
        answers: answers.iter().map(|a| a.to_string()).collect(),
    })
}

/// `n` listening records with metadata cycling through four strata.
pub fn stratified_split(n: usize) -> DatasetSplit {
    let records = (0..n)
        .map(|i| {
            listening(&format!("r{i:06}"), &format!("the chair number {i}"), 0, 2).with_meta(RecordMeta {
                object_noun_count: 1 + (i % 3) as u32,
                view_dependent: i % 7 < 3,
            })
        })
        .collect();
    DatasetSplit::new(VariantStyle::Original, "nr3d", records)
}

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}
