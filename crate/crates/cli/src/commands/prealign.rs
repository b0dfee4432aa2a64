use langrobust::corpus::save_split;
use langrobust::prealign::{exemplar_skeleton, fallback_count, normalize_split, PrealignConfig};
use serde::Serialize;

use crate::args::PrealignArgs;
use crate::context::{say, load, stem, Context, Table};
use crate::error::{CliResult, Failure};

#[derive(Serialize)]
struct PrealignSummary {
    input: String,
    output: String,
    style: String,
    model_style_id: String,
    model_id: String,
    records: usize,
    changed: usize,
    fallbacks: usize,
}

pub fn run(ctx: &Context, args: &PrealignArgs) -> CliResult<()> {
    if let Some(k) = args.sample_exemplars {
        let training = load(args.training.as_ref().expect("clap requires --training"))?;
        let seed = ctx.require_seed("exemplar sampling")?;
        let skeleton = exemplar_skeleton(&training, k, seed);
        let path = ctx.write_json("exemplars.json", &skeleton)?;
        say(&format!("wrote {} exemplar targets to {}; fill in each `source`\n", skeleton.len(), path.display()));
        return Ok(());
    }
    let input = args.input.as_ref().expect("clap requires --input");
    let config = match args.prealign_config.as_ref().or(ctx.config.prealign_config.as_ref()) {
        Some(p) => PrealignConfig::from_file(p)?,
        None => PrealignConfig::bundled(),
    };
    let config = PrealignConfig { workers: ctx.workers, ..config };
    let split = load(input)?;
    let cache = ctx.cache(args.cache_dir.as_ref())?;
    let provider = ctx.prealign_provider(cache.clone())?;
    let out = normalize_split(&split, &config, provider.as_ref(), cache.as_deref());
    if out.len() != split.len() {
        return Err(Failure::validation("pre-alignment changed the record count"));
    }
    let path = ctx.out_path(format!("{}.prealigned.jsonl", stem(input)))?;
    save_split(&out, &path)?;

    let summary = PrealignSummary {
        input: input.display().to_string(),
        output: path.display().to_string(),
        style: out.style.to_string(),
        model_style_id: config.model_style_id.clone(),
        model_id: provider.model_id().to_string(),
        records: out.len(),
        changed: split.records.iter().zip(&out.records).filter(|(a, b)| a.sentence != b.sentence).count(),
        fallbacks: fallback_count(&out),
    };
    ctx.write_json(&format!("{}.prealign.json", stem(input)), &summary)?;
    let mut t = Table::new(["split", "records", "changed", "fallbacks", "output"]);
    t.row([summary.style.clone(), summary.records.to_string(), summary.changed.to_string(), summary.fallbacks.to_string(), summary.output.clone()]);
    ctx.emit(&summary, &t)
}
