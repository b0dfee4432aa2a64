use std::collections::BTreeMap;

use langrobust::corpus::{build_augmented_training, save_split, style_counts, AugmentMode, VariantStyle};
use serde::Serialize;

use crate::args::{AugmentArgs, Mode};
use crate::context::{load, Context, Table};
use crate::error::CliResult;

#[derive(Serialize)]
struct AugmentSummary {
    output: String,
    mode: &'static str,
    records: usize,
    per_style: BTreeMap<VariantStyle, usize>,
    seed: u64,
}

pub fn run(ctx: &Context, args: &AugmentArgs) -> CliResult<()> {
    let seed = ctx.require_seed("augment")?;
    let original = load(&args.original)?;
    let variants = args.variants.iter().map(|p| load(p)).collect::<CliResult<Vec<_>>>()?;
    let (mode, name) = match args.mode {
        Mode::Balanced => (AugmentMode::BalancedSameSize, "balanced"),
        Mode::Merged => (AugmentMode::MergedDouble, "merged"),
    };
    let out = build_augmented_training(&original, &variants, mode, seed)?;
    let path = match &args.output {
        Some(p) => p.clone(),
        None => ctx.out_path(format!("augmented.{name}.jsonl"))?,
    };
    save_split(&out, &path)?;
    let summary = AugmentSummary {
        output: path.display().to_string(),
        mode: name,
        records: out.len(),
        per_style: style_counts(&out).into_iter().collect(),
        seed,
    };
    ctx.write_json(&format!("augmented.{name}.json"), &summary)?;
    let mut t = Table::new(["style", "records"]);
    for (s, n) in &summary.per_style {
        t.row([s.to_string(), n.to_string()]);
    }
    t.row(["total".to_string(), summary.records.to_string()]);
    ctx.emit(&summary, &t)
}
