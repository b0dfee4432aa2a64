use std::collections::HashSet;

use langrobust::probe::{compare_stages, histogram_pdf, kde_pdf, load_matrix, paired_cosine, PairedCosine, PdfCurve};

use crate::args::ProbeArgs;
use crate::context::{say, fmt4, write_file, Context, Table};
use crate::error::{CliResult, Failure};

fn stage(a: &std::path::Path, b: &std::path::Path, keep: Option<&HashSet<String>>) -> CliResult<PairedCosine> {
    let ma = load_matrix(a).map_err(|e| Failure::from(e).context(format!("loading {}", a.display())))?;
    let mb = load_matrix(b).map_err(|e| Failure::from(e).context(format!("loading {}", b.display())))?;
    let mut p = paired_cosine(&ma, &mb)?;
    if let Some(keep) = keep {
        p.retain_ids(keep);
    }
    Ok(p)
}

pub fn run(ctx: &Context, args: &ProbeArgs) -> CliResult<()> {
    if args.bins == 0 {
        return Err(Failure::usage("--bins must be at least 1"));
    }
    let keep = match &args.failures {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::validation(format!("{}: {e}", p.display())))?;
            Some(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_string).collect::<HashSet<_>>())
        }
        None => None,
    };
    let pre = stage(&args.pre_original, &args.pre_variant, keep.as_ref())?;
    let post = stage(&args.post_original, &args.post_variant, keep.as_ref())?;
    let report = compare_stages(&pre, &post, args.tau, args.bins)?;

    let pdf = |p: &PairedCosine| -> CliResult<PdfCurve> {
        Ok(if args.kde { kde_pdf(&p.values(), args.bins.max(2))? } else { histogram_pdf(&p.values(), args.bins)? })
    };
    write_file(&ctx.out_path("probe.pre.pdf.csv")?, &pdf(&pre)?.to_csv())?;
    write_file(&ctx.out_path("probe.post.pdf.csv")?, &pdf(&post)?.to_csv())?;
    ctx.write_json("probe.json", &report)?;

    let mut t = Table::new(["stage", "n", "mean", "median", "below_tau"]);
    for s in [&report.pre, &report.post] {
        t.row([s.stage_label.clone(), s.n.to_string(), fmt4(s.mean), fmt4(s.median), fmt4(s.fraction_below)]);
    }
    t.row(["shift (post - pre)".to_string(), "-".into(), fmt4(report.mean_shift), "-".into(), fmt4(report.mass_shift_below_tau)]);
    ctx.emit(&report, &t)?;
    if !ctx.json {
        say(&format!("{}\n", report.note));
    }
    Ok(())
}
