use std::collections::BTreeMap;
use std::path::PathBuf;

use langrobust::corpus::{DatasetSplit, VariantStyle};
use langrobust::metrics::{build_report, load_predictions, reports_to_csv, Metric, Prediction, RobustnessReport, METRIC_CONVENTIONS};
use serde::Serialize;

use crate::args::EvaluateArgs;
use crate::context::{fmt4, load, write_file, Context, Table};
use crate::error::{CliResult, Failure};

#[derive(Serialize)]
struct Score {
    split: String,
    style: VariantStyle,
    metric: String,
    score: f64,
}

#[derive(Serialize)]
struct EvaluationReport {
    model: Option<String>,
    conventions: String,
    scores: Vec<Score>,
    /// Present when the original and all five variant splits were scored.
    reports: Vec<RobustnessReport>,
}

fn parse_pair(s: &str) -> CliResult<(PathBuf, PathBuf)> {
    match s.split_once('=') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((PathBuf::from(a), PathBuf::from(b))),
        _ => Err(Failure::usage(format!("expected SPLIT=PREDICTIONS, got `{s}`"))),
    }
}

fn load_pair(s: &str) -> CliResult<(String, DatasetSplit, Vec<Prediction>)> {
    let (split_path, pred_path) = parse_pair(s)?;
    let split = load(&split_path)?;
    let preds = load_predictions(&pred_path).map_err(|e| Failure::from(e).context(format!("loading {}", pred_path.display())))?;
    Ok((split_path.display().to_string(), split, preds))
}

pub fn run(ctx: &Context, args: &EvaluateArgs) -> CliResult<()> {
    let metrics: Vec<Metric> = args.metrics.iter().map(|m| m.parse::<Metric>()).collect::<Result<_, _>>().map_err(Failure::usage)?;
    if args.original.is_none() && args.variants.is_empty() {
        return Err(Failure::usage("nothing to evaluate: pass --original and/or --variant"));
    }
    let mut inputs = Vec::new();
    if let Some(o) = &args.original {
        let loaded = load_pair(o)?;
        if loaded.1.style != VariantStyle::Original {
            return Err(Failure::validation(format!("--original {} holds a {} split", loaded.0, loaded.1.style)));
        }
        inputs.push(loaded);
    }
    for v in &args.variants {
        let loaded = load_pair(v)?;
        if loaded.1.style == VariantStyle::Original {
            return Err(Failure::validation(format!("--variant {} holds an original split", loaded.0)));
        }
        if inputs.iter().any(|(_, s, _)| s.style == loaded.1.style) {
            return Err(Failure::validation(format!("more than one {} split", loaded.1.style)));
        }
        inputs.push(loaded);
    }

    let mut report = EvaluationReport { model: args.model.clone(), conventions: METRIC_CONVENTIONS.into(), scores: Vec::new(), reports: Vec::new() };
    let mut by_metric: Vec<BTreeMap<VariantStyle, f64>> = vec![BTreeMap::new(); metrics.len()];
    for (name, split, preds) in &inputs {
        for (i, m) in metrics.iter().enumerate() {
            let score = m.evaluate(preds, split).map_err(|e| Failure::from(e).context(format!("{m} on {name}")))?;
            by_metric[i].insert(split.style, score);
            report.scores.push(Score { split: name.clone(), style: split.style, metric: m.to_string(), score });
        }
    }
    let complete = |scores: &BTreeMap<VariantStyle, f64>| scores.len() == 1 + VariantStyle::VARIANTS.len();
    for (m, mut scores) in metrics.iter().zip(by_metric) {
        if !complete(&scores) {
            continue;
        }
        let oracle = scores.remove(&VariantStyle::Original).expect("complete set has the original");
        report.reports.push(build_report(&m.to_string(), oracle, &scores)?);
    }
    if !report.reports.is_empty() {
        write_file(&ctx.out_path("robustness.csv")?, &reports_to_csv(&report.reports))?;
    } else if inputs.len() > 1 {
        log::info!("robustness reports need the original and all five variant splits");
    }
    ctx.write_json("evaluation.json", &report)?;

    let mut t = Table::new(["split", "style", "metric", "score"]);
    for s in &report.scores {
        t.row([s.split.clone(), s.style.to_string(), s.metric.clone(), fmt4(s.score)]);
    }
    for r in &report.reports {
        t.row(["average robustness".to_string(), "-".into(), r.metric.clone(), fmt4(r.average_robustness)]);
    }
    ctx.emit(&report, &t)
}
