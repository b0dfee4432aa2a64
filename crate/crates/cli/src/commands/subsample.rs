use langrobust::corpus::{save_split, subsample_with, SubsampleOptions};
use serde::Serialize;

use crate::args::SubsampleArgs;
use crate::context::{load, stem, Context, Table};
use crate::error::CliResult;

#[derive(Serialize)]
struct SubsampleSummary {
    input: String,
    output: String,
    records_in: usize,
    records_out: usize,
    fraction: f64,
    stratified: bool,
    seed: u64,
}

pub fn run(ctx: &Context, args: &SubsampleArgs) -> CliResult<()> {
    let seed = ctx.require_seed("subsample")?;
    let split = load(&args.input)?;
    let opts = SubsampleOptions {
        difficulty_threshold: args.difficulty_threshold,
        ..SubsampleOptions::new(args.fraction, args.stratify, seed)
    };
    let out = subsample_with(&split, &opts)?;
    let path = match &args.output {
        Some(p) => p.clone(),
        None => ctx.out_path(format!("{}.subsample.jsonl", stem(&args.input)))?,
    };
    save_split(&out, &path)?;
    let summary = SubsampleSummary {
        input: args.input.display().to_string(),
        output: path.display().to_string(),
        records_in: split.len(),
        records_out: out.len(),
        fraction: args.fraction,
        stratified: args.stratify,
        seed,
    };
    ctx.write_json(&format!("{}.subsample.json", stem(&args.input)), &summary)?;
    let mut t = Table::new(["input", "records_in", "records_out", "output"]);
    t.row([summary.input.clone(), summary.records_in.to_string(), summary.records_out.to_string(), summary.output.clone()]);
    ctx.emit(&summary, &t)
}
