use langrobust::corpus::VariantStyle;
use langrobust::quality::{assess, AssessOptions, EditGranularity, EmbeddingTable, QualityReport};

use crate::args::{AssessArgs, Granularity};
use crate::context::{fmt4, fmt_opt, load, write_file, Context, Table};
use crate::error::{CliResult, Failure};

pub fn run(ctx: &Context, args: &AssessArgs) -> CliResult<()> {
    let table_path = args
        .embeddings
        .as_ref()
        .or(ctx.config.embedding_table.as_ref())
        .ok_or_else(|| Failure::validation("no embedding table: pass --embeddings or set `embedding_table`"))?;
    let table = EmbeddingTable::load(table_path, !args.case_sensitive)?;
    let original = load(&args.original)?;
    let granularity = match args.granularity {
        Granularity::Token => EditGranularity::Token,
        Granularity::Char => EditGranularity::Char,
    };
    let opts = AssessOptions { granularity, ..AssessOptions::default() };
    let neural = if args.neural { Some(ctx.embedding_provider(ctx.cache(args.cache_dir.as_ref())?)?) } else { None };

    let mut report = QualityReport::new(granularity);
    report.static_model = Some(table_path.display().to_string());
    report.neural_model = neural.as_ref().map(|p| p.model_id().to_string());
    for path in &args.variants {
        let variant = load(path)?;
        if variant.style == VariantStyle::Original {
            return Err(Failure::validation(format!("{} is not a variant split", path.display())));
        }
        let row = assess(&original, &variant, &table, neural.as_deref(), &opts)?;
        report.rows.push(row);
    }
    report.rows.sort_by_key(|r| r.style);

    ctx.write_json("quality.json", &report)?;
    write_file(&ctx.out_path("quality.csv")?, &report.to_csv())?;
    let mut t = Table::new(["style", "neural_sim", "static_sim", "ed", "n", "oov_rate"]);
    for r in &report.rows {
        t.row([
            r.style.to_string(),
            fmt_opt(r.mean_neural_sim),
            fmt_opt(r.mean_static_sim),
            fmt4(r.mean_edit_distance),
            r.n.to_string(),
            fmt4(r.oov_rate),
        ]);
    }
    ctx.emit(&report, &t)
}
