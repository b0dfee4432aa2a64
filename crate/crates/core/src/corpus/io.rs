use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CorpusError, DatasetSplit, Record, VariantStyle};
use crate::diversity::tokenize;

/// One JSON Lines row: the record plus the split style for variant splits.
#[derive(Serialize, Deserialize)]
struct RecordLine {
    #[serde(flatten)]
    record: Record,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    style: Option<VariantStyle>,
}

/// Reads and validates a JSON Lines split.
///
/// Rows without a `tokens` field are tokenized on load; rows that carry one
/// must match the tokenizer exactly. Variant splits tag every row with a
/// `style` key, and all rows must agree. An empty file loads as an empty
/// `Original` split.
pub fn load_split(path: impl AsRef<Path>) -> Result<DatasetSplit, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let reader = BufReader::new(file);

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut style: Option<VariantStyle> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut row: RecordLine = serde_json::from_str(&line)
            .map_err(|e| CorpusError::Parse { line: line_no, message: e.to_string() })?;
        if row.record.tokens.is_empty() {
            row.record.tokens = tokenize(&row.record.sentence);
        }
        row.record.validate().map_err(|e| match e {
            CorpusError::InvalidRecord { id, reason } => {
                CorpusError::InvalidRecord { id, reason: format!("line {line_no}: {reason}") }
            }
            other => other,
        })?;
        let row_style = row.style.unwrap_or(VariantStyle::Original);
        match style {
            None => style = Some(row_style),
            Some(s) if s != row_style => {
                return Err(CorpusError::Parse {
                    line: line_no,
                    message: format!("style `{row_style}` differs from earlier rows (`{s}`)"),
                })
            }
            _ => {}
        }
        if !seen.insert(row.record.id.clone()) {
            return Err(CorpusError::DuplicateId(row.record.id));
        }
        records.push(row.record);
    }

    let source_dataset = records.first().map(|r| r.dataset_id.clone()).unwrap_or_default();
    Ok(DatasetSplit {
        style: style.unwrap_or(VariantStyle::Original),
        source_dataset,
        records,
    })
}

/// Writes a split as JSON Lines (UTF-8, LF). The write goes to a temporary
/// sibling first and is renamed into place.
pub fn save_split(split: &DatasetSplit, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    split.validate()?;
    let tmp = path.with_extension("jsonl.tmp");
    {
        let file = File::create(&tmp).map_err(|e| CorpusError::io(&tmp, e))?;
        let mut out = BufWriter::new(file);
        let style = split.style.is_variant().then_some(split.style);
        for record in &split.records {
            let line = RecordLine { record: record.clone(), style };
            serde_json::to_writer(&mut out, &line).map_err(|e| CorpusError::io(&tmp, e.into()))?;
            out.write_all(b"\n").map_err(|e| CorpusError::io(&tmp, e))?;
        }
        out.flush().map_err(|e| CorpusError::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| CorpusError::io(path, e))
}
