use std::collections::BTreeMap;

use langrobust::corpus::{save_split, VariantStyle};
use langrobust::providers::MockKind;
use langrobust::variantgen::{flagged_count, generate_split, PromptTemplate};
use serde::Serialize;

use crate::args::GenerateArgs;
use crate::context::{say, load, Context};
use crate::error::{CliResult, Failure};

#[derive(Serialize)]
struct StyleSummary {
    records: usize,
    flagged: usize,
    model_id: String,
    path: String,
}

#[derive(Serialize)]
struct GenerateSummary {
    input: String,
    records: usize,
    styles: BTreeMap<VariantStyle, StyleSummary>,
}

pub fn run(ctx: &Context, args: &GenerateArgs) -> CliResult<()> {
    let mut styles = Vec::new();
    for s in &args.styles {
        let style: VariantStyle = s.parse().map_err(|_| Failure::usage(format!("unknown style `{s}`")))?;
        if !style.is_variant() {
            return Err(Failure::usage("the original style cannot be generated"));
        }
        if !styles.contains(&style) {
            styles.push(style);
        }
    }
    let original = load(&args.input)?;
    let template = match args.prompts.as_ref().or(ctx.config.prompt_asset.as_ref()) {
        Some(p) => PromptTemplate::from_file(p)?,
        None => PromptTemplate::bundled(),
    };
    let mut policy = ctx.config.generation.unwrap_or_default();
    policy.workers = ctx.workers;
    let cache = ctx.cache(args.cache_dir.as_ref())?;

    let mut summary = GenerateSummary { input: args.input.display().to_string(), records: original.len(), styles: BTreeMap::new() };
    for style in styles {
        let provider = ctx.chat_provider(MockKind::for_style(style), cache.clone())?;
        let split = generate_split(&original, style, provider.as_ref(), &policy, &template)?;
        let path = ctx.out_path(format!("{style}.jsonl"))?;
        save_split(&split, &path)?;
        log::info!("{style}: wrote {} records to {}", split.len(), path.display());
        summary.styles.insert(
            style,
            StyleSummary {
                records: split.len(),
                flagged: flagged_count(&split),
                model_id: provider.model_id().to_string(),
                path: path.display().to_string(),
            },
        );
    }
    ctx.write_json("generate.json", &summary)?;
    say(&(serde_json::to_string_pretty(&summary)? + "\n"));
    Ok(())
}

