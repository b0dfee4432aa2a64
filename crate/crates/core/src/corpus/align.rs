use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;

use super::sample::{largest_remainder, seeded_rng};
use super::{CorpusError, DatasetSplit, Provenance, Record, VariantStyle};

/// Pairs each original record with its variant by id, in original order.
pub fn align<'a>(original: &'a DatasetSplit, variant: &'a DatasetSplit) -> Result<Vec<(&'a Record, &'a Record)>, CorpusError> {
    if !variant.style.is_variant() {
        return Err(CorpusError::NotAVariant);
    }
    let by_id: HashMap<&str, &Record> = variant.records.iter().map(|r| (r.id.as_str(), r)).collect();
    let original_ids: HashSet<&str> = original.ids().collect();

    let missing: Vec<String> = original
        .ids()
        .filter(|id| !by_id.contains_key(id))
        .map(str::to_string)
        .collect();
    let extra: Vec<String> = variant
        .ids()
        .filter(|id| !original_ids.contains(id))
        .map(str::to_string)
        .collect();
    if !missing.is_empty() || !extra.is_empty() || by_id.len() != variant.len() {
        return Err(CorpusError::Misaligned { style: variant.style, missing, extra });
    }
    Ok(original.records.iter().map(|o| (o, by_id[o.id.as_str()])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentMode {
    /// Same size as the original, drawn evenly from the five variant styles.
    BalancedSameSize,
    /// The original plus one variant draw per record, spread evenly over styles.
    MergedDouble,
}

/// Separator between the original id and the style tag in augmented ids.
pub const AUGMENTED_ID_SEPARATOR: &str = "::";

fn augmented_record(record: &Record, style: VariantStyle) -> Record {
    let mut r = record.clone();
    r.id = format!("{}{}{}", record.id, AUGMENTED_ID_SEPARATOR, style);
    let mut prov = r.provenance.take().unwrap_or_default();
    prov.source_style = Some(style);
    r.provenance = Some(prov);
    r
}

/// Builds a mixed-style training split from an original split and its five
/// aligned variants.
///
/// Each original record is assigned exactly one variant style. Style quotas are
/// `N / 5` with the remainder spread by largest remainder, and the assignment
/// of records to styles is a seeded shuffle. Variant-derived records get the id
/// `<original id>::<style>` and carry `provenance.source_style`.
pub fn build_augmented_training(
    original: &DatasetSplit,
    variants: &[DatasetSplit],
    mode: AugmentMode,
    seed: u64,
) -> Result<DatasetSplit, CorpusError> {
    let mut by_style: HashMap<VariantStyle, &DatasetSplit> = HashMap::new();
    for v in variants {
        if by_style.insert(v.style, v).is_some() {
            return Err(CorpusError::DuplicateStyle(v.style));
        }
    }
    let mut aligned = Vec::with_capacity(5);
    for style in VariantStyle::VARIANTS {
        let split = by_style.get(&style).ok_or(CorpusError::MissingStyle(style))?;
        let pairs = align(original, split)?;
        aligned.push((style, pairs));
    }
    if by_style.len() != 5 {
        return Err(CorpusError::NotAVariant);
    }

    let n = original.len();
    let quotas = largest_remainder(&[n; 5], 0.2, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded_rng(seed));

    let mut assignment = vec![0usize; n];
    let mut cursor = 0;
    for (slot, &q) in quotas.iter().enumerate() {
        for &idx in &order[cursor..cursor + q] {
            assignment[idx] = slot;
        }
        cursor += q;
    }

    let drawn = (0..n).map(|i| {
        let (style, pairs) = &aligned[assignment[i]];
        augmented_record(pairs[i].1, *style)
    });

    let records: Vec<Record> = match mode {
        AugmentMode::BalancedSameSize => drawn.collect(),
        AugmentMode::MergedDouble => original.records.iter().cloned().chain(drawn).collect(),
    };

    Ok(DatasetSplit {
        style: VariantStyle::Original,
        source_dataset: original.source_dataset.clone(),
        records,
    })
}

/// Count of records per source style in an augmented split; records without
/// a source style are counted as `Original`.
pub fn style_counts(split: &DatasetSplit) -> HashMap<VariantStyle, usize> {
    let mut counts = HashMap::new();
    for r in &split.records {
        let style = r
            .provenance
            .as_ref()
            .and_then(|p: &Provenance| p.source_style)
            .unwrap_or(VariantStyle::Original);
        *counts.entry(style).or_insert(0) += 1;
    }
    counts
}
