use std::collections::BTreeMap;

use langrobust::diversity::{profile, DiversityOptions, DiversitySummary, KdeOptions, LexiconTagger};
use serde::Serialize;

use crate::args::DiversityArgs;
use crate::context::{fmt4, load, stem, write_file, Context, Table};
use crate::error::{CliResult, Failure};

#[derive(Serialize)]
struct DiversityReport {
    splits: BTreeMap<String, DiversitySummary>,
}

pub fn run(ctx: &Context, args: &DiversityArgs) -> CliResult<()> {
    if args.resolution < 2 {
        return Err(Failure::usage("--resolution must be at least 2"));
    }
    let tagger = match args.tagger.as_ref().or(ctx.config.tagger_asset.as_ref()) {
        Some(p) => LexiconTagger::from_file(p)?,
        None => LexiconTagger::bundled(),
    };
    let opts = DiversityOptions {
        min_df: args.min_df.max(1),
        kde: KdeOptions { resolution: [args.resolution; 2], ..KdeOptions::default() },
        ..DiversityOptions::default()
    };
    let mut report = DiversityReport { splits: BTreeMap::new() };
    let mut t = Table::new(["split", "sentences", "unique_words", "total_words", "avg_length", "structures", "pc1_ratio", "pc2_ratio"]);
    for path in &args.inputs {
        let split = load(path)?;
        let name = stem(path);
        let ids: Vec<String> = split.ids().map(str::to_string).collect();
        let texts: Vec<String> = split.records.iter().map(|r| r.sentence.clone()).collect();
        let prof = profile(&ids, &texts, &tagger, &opts).map_err(|e| Failure::from(e).context(format!("profiling {name}")))?;
        write_file(&ctx.out_path(format!("{name}.grid.csv"))?, &prof.grid.to_csv())?;
        write_file(&ctx.out_path(format!("{name}.points.csv"))?, &prof.points_csv())?;
        let s = prof.summary();
        t.row([
            name.clone(),
            s.stats.sentences.to_string(),
            s.stats.unique_words.to_string(),
            s.stats.total_words.to_string(),
            format!("{:.2}", s.stats.avg_length),
            s.distinct_signatures.to_string(),
            fmt4(s.explained_variance_ratio[0]),
            fmt4(s.explained_variance_ratio[1]),
        ]);
        if report.splits.insert(name.clone(), s).is_some() {
            return Err(Failure::usage(format!("two inputs share the name `{name}`")));
        }
    }
    ctx.write_json("diversity.json", &report)?;
    ctx.emit(&report, &t)
}
