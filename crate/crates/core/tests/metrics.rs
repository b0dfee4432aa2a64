mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::oracles::{self, Gen};
use common::{grounding, listening, qa, toks};
use langrobust::corpus::Box3D;
use langrobust::metrics::{
    acc_at_kiou, bleu1, build_report, cider, cider_items, corpus_bleu1, exact_match_at_k, iou3d, listening_accuracy,
    reports_to_csv, split_bleu1, split_cider, Metric, MetricsError, Payload, Prediction,
};
use langrobust::quality::normalized_edit_distance;
use langrobust::{DatasetSplit, VariantStyle};
use proptest::prelude::*;

const WORDS: &[&str] = &["the", "a", "chair", "table", "red", "brown", "lamp", "near", "door", "of"];

fn int_box(g: &mut Gen) -> ([i64; 3], [i64; 3]) {
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    for d in 0..3 {
        lo[d] = g.below(8) as i64 - 4;
        hi[d] = lo[d] + 1 + g.below(6) as i64;
    }
    (lo, hi)
}

fn to_box((lo, hi): ([i64; 3], [i64; 3])) -> Box3D {
    Box3D::new(
        std::array::from_fn(|d| (lo[d] + hi[d]) as f64 / 2.0),
        std::array::from_fn(|d| (hi[d] - lo[d]) as f64),
    )
}

#[test]
fn randomized_oracle_agreement() {
    let start = Instant::now();
    let mut g = Gen(0x5eed);
    for _ in 0..600 {
        let a = g.words(WORDS, 9);
        let b = g.words(WORDS, 9);
        assert_eq!(normalized_edit_distance(&a, &b), oracles::normalized_edit_distance(&a, &b));

        let cand = g.words(WORDS, 7);
        let refs: Vec<Vec<String>> = (0..1 + g.below(3)).map(|_| g.words(WORDS, 7)).collect();
        let got = bleu1(&cand, &refs);
        let want = oracles::bleu1(&cand, &refs);
        assert!((got - want).abs() < 1e-9, "bleu {cand:?} {refs:?}: {got} vs {want}");

        let (ba, bb) = (int_box(&mut g), int_box(&mut g));
        let got = iou3d(&to_box(ba), &to_box(bb));
        assert!((got - oracles::iou_integer(ba, bb)).abs() < 1e-12);
    }
    for _ in 0..500 {
        let n = 2 + g.below(5) as usize;
        let items: Vec<(Vec<String>, Vec<Vec<String>>)> = (0..n)
            .map(|_| {
                let refs = (0..1 + g.below(3)).map(|_| g.words(WORDS, 6)).collect();
                (g.words(WORDS, 6), refs)
            })
            .collect();
        let cands: BTreeMap<String, Vec<String>> =
            items.iter().enumerate().map(|(i, (c, _))| (format!("{i:02}"), c.clone())).collect();
        let refs: BTreeMap<String, Vec<Vec<String>>> =
            items.iter().enumerate().map(|(i, (_, r))| (format!("{i:02}"), r.clone())).collect();
        let got = cider_items(&cands, &refs).unwrap();
        let want = oracles::cider_items(&items);
        for (i, w) in want.iter().enumerate() {
            let v = got[&format!("{i:02}")];
            assert!((v - w).abs() < 1e-9, "cider item {i}: {v} vs {w}");
        }
    }
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn closed_forms() {
    let unit = Box3D::new([0.0; 3], [1.0; 3]);
    assert_eq!(iou3d(&unit, &Box3D::new([0.5, 0.0, 0.0], [1.0; 3])), 1.0 / 3.0);
    assert_eq!(bleu1(&toks("the the the"), &[toks("the cat")]), 1.0 / 3.0);

    // every candidate equals its single reference and no two items share content
    let sents = [("a", "the brown wooden chair by the door"), ("b", "a white table near two lamps")];
    let cands: BTreeMap<String, Vec<String>> = sents.iter().map(|(k, v)| (k.to_string(), toks(v))).collect();
    let refs: BTreeMap<String, Vec<Vec<String>>> = sents.iter().map(|(k, v)| (k.to_string(), vec![toks(v)])).collect();
    let items = cider_items(&cands, &refs).unwrap();
    assert_eq!(items["a"], 10.0);
    assert_eq!(items["b"], 10.0);
    assert_eq!(cider(&cands, &refs).unwrap(), 10.0);
    // a three-token item has no 4-grams, so one of the four orders contributes 0
    let short: BTreeMap<String, Vec<String>> = [("a", "brown wooden chair"), ("b", "white table lamp")]
        .iter()
        .map(|(k, v)| (k.to_string(), toks(v)))
        .collect();
    let short_refs = short.iter().map(|(k, v)| (k.clone(), vec![v.clone()])).collect();
    assert_eq!(cider_items(&short, &short_refs).unwrap()["a"], 7.5);
}

#[test]
fn cider_rejects_tiny_or_misaligned_corpora() {
    let one: BTreeMap<String, Vec<String>> = [("a".to_string(), toks("x"))].into();
    let one_ref: BTreeMap<String, Vec<Vec<String>>> = [("a".to_string(), vec![toks("x")])].into();
    assert!(matches!(cider(&one, &one_ref), Err(MetricsError::CorpusTooSmall(1))));
    let other: BTreeMap<String, Vec<Vec<String>>> = [("b".to_string(), vec![toks("x")])].into();
    assert!(matches!(cider(&one, &other), Err(MetricsError::IdMismatch { .. })));
}

#[test]
fn corpus_bleu_pools_counts() {
    let items = vec![(toks("a b"), vec![toks("a b")]), (toks("c d e f"), vec![toks("x y z w")])];
    // 2 clipped matches over 6 candidate tokens, no brevity penalty
    assert!((corpus_bleu1(&items) - 2.0 / 6.0).abs() < 1e-12);
}

#[test]
fn grounding_accuracy_on_ten_boxes() {
    let gt = Box3D::new([0.0; 3], [1.0; 3]);
    let records = (0..10).map(|i| grounding(&format!("g{i}"), "the chair", gt)).collect();
    let split = DatasetSplit::new(VariantStyle::Original, "scanrefer", records);
    // six exact hits, four disjoint misses
    let preds: Vec<Prediction> = (0..10)
        .map(|i| {
            let center = if i < 6 { [0.0; 3] } else { [5.0, 5.0, 5.0] };
            Prediction::new(format!("g{i}"), Payload::Box(Box3D::new(center, [1.0; 3])))
        })
        .collect();
    assert_eq!(acc_at_kiou(&preds, &split, 0.25).unwrap(), 0.6);
    assert_eq!(acc_at_kiou(&preds, &split, 0.5).unwrap(), 0.6);
    assert!(acc_at_kiou(&preds, &split, 1.0).is_err());
}

#[test]
fn listening_accuracy_sixty_percent() {
    let records = (0..20).map(|i| listening(&format!("n{i}"), "the lamp", i % 3, 3)).collect();
    let split = DatasetSplit::new(VariantStyle::Original, "nr3d", records);
    let preds: Vec<Prediction> = (0..20)
        .map(|i| {
            let pick = if i < 12 { i % 3 } else { (i + 1) % 3 };
            Prediction::new(format!("n{i}"), Payload::SelectedIndex(pick as i64))
        })
        .collect();
    assert_eq!(listening_accuracy(&preds, &split).unwrap(), 0.6);

    let mut bad = preds.clone();
    bad[0].payload = Payload::SelectedIndex(3);
    assert!(matches!(listening_accuracy(&bad, &split), Err(MetricsError::IndexOutOfRange { .. })));
}

#[test]
fn exact_match_ten_of_fifty() {
    let records = (0..50).map(|i| qa(&format!("q{i}"), "What is it?", &["A Lamp."])).collect();
    let split = DatasetSplit::new(VariantStyle::Original, "scanqa", records);
    let preds: Vec<Prediction> = (0..50)
        .map(|i| {
            let answers = if i < 10 { vec!["a lamp".to_string()] } else { vec!["chair".into(), "lamp".into()] };
            Prediction::new(format!("q{i}"), Payload::RankedAnswers(answers))
        })
        .collect();
    assert_eq!(exact_match_at_k(&preds, &split, 1).unwrap(), 0.2);
    assert_eq!(exact_match_at_k(&preds, &split, 10).unwrap(), 0.2);
}

#[test]
fn missing_and_extra_predictions_are_errors() {
    let records = (0..3).map(|i| listening(&format!("n{i}"), "x", 0, 2)).collect();
    let split = DatasetSplit::new(VariantStyle::Original, "nr3d", records);
    let preds = vec![
        Prediction::new("n0", Payload::SelectedIndex(0)),
        Prediction::new("n1", Payload::SelectedIndex(0)),
        Prediction::new("zz", Payload::SelectedIndex(0)),
    ];
    match listening_accuracy(&preds, &split) {
        Err(MetricsError::IdMismatch { missing, extra }) => {
            assert_eq!(missing, vec!["n2"]);
            assert_eq!(extra, vec!["zz"]);
        }
        other => panic!("unexpected {other:?}"),
    }
    let wrong = vec![Prediction::new("n0", Payload::GeneratedText("x".into()))];
    let one = DatasetSplit::new(VariantStyle::Original, "nr3d", vec![listening("n0", "x", 0, 2)]);
    assert!(matches!(listening_accuracy(&wrong, &one), Err(MetricsError::PayloadMismatch { .. })));
}

#[test]
fn qa_text_metrics_match_oracles() {
    let gts = [["a brown chair", "chair"], ["the lamp", "white lamp"], ["two", "2"], ["on the desk", "desk"]];
    let outs = ["brown chair", "lamp", "three", "desk"];
    let records = gts.iter().enumerate().map(|(i, a)| qa(&format!("q{i}"), "q?", a)).collect();
    let split = DatasetSplit::new(VariantStyle::Original, "scanqa", records);
    let preds: Vec<Prediction> =
        outs.iter().enumerate().map(|(i, o)| Prediction::new(format!("q{i}"), Payload::GeneratedText(o.to_string()))).collect();

    let items: Vec<(Vec<String>, Vec<Vec<String>>)> =
        outs.iter().zip(&gts).map(|(o, a)| (toks(o), a.iter().map(|s| toks(s)).collect())).collect();
    let want = oracles::cider_items(&items).iter().sum::<f64>() / items.len() as f64;
    assert!((split_cider(&preds, &split).unwrap() - want).abs() < 1e-9);
    assert!((Metric::Cider.evaluate(&preds, &split).unwrap() - want).abs() < 1e-9);
    let b = split_bleu1(&preds, &split).unwrap();
    assert!(b > 0.0 && b <= 1.0);
}

#[test]
fn report_reproduces_published_arithmetic() {
    let row = [11.32, 19.73, 17.04, 12.79, 9.55];
    let per_style: BTreeMap<VariantStyle, f64> = VariantStyle::VARIANTS.into_iter().zip(row).collect();
    let r = build_report("acc@0.5", 42.36, &per_style).unwrap();
    assert!((r.drops[&VariantStyle::Tone] - 32.81).abs() < 1e-9);
    assert!((r.average_robustness - 14.086).abs() < 0.005);
    assert!(r.is_consistent(1e-12));
    let csv = reports_to_csv(&[r]);
    assert!(csv.starts_with("metric,oracle,syntax,voice,modifier,accent,tone,average\n"));
    assert!(csv.contains("acc@0.5,42.3600,11.3200,19.7300,17.0400,12.7900,9.5500,14.0860"));
}

#[test]
fn report_needs_all_five_styles() {
    let per_style: BTreeMap<VariantStyle, f64> = [(VariantStyle::Syntax, 1.0)].into();
    assert!(matches!(build_report("m", 2.0, &per_style), Err(MetricsError::MissingStyle(_))));
}

proptest! {
    #[test]
    fn report_mean_ignores_order(mut scores in proptest::collection::vec(0.0f64..100.0, 5), oracle in 0.0f64..100.0) {
        let forward: BTreeMap<VariantStyle, f64> = VariantStyle::VARIANTS.into_iter().zip(scores.clone()).collect();
        let a = build_report("m", oracle, &forward).unwrap();
        prop_assert!(a.is_consistent(1e-9));
        scores.reverse();
        let mut styles = VariantStyle::VARIANTS;
        styles.reverse();
        let backward: BTreeMap<VariantStyle, f64> = styles.into_iter().zip(scores).collect();
        prop_assert_eq!(a, build_report("m", oracle, &backward).unwrap());
    }

    #[test]
    fn scores_ignore_record_order(hits in proptest::collection::vec(any::<bool>(), 1..40), rot in 0usize..40) {
        let n = hits.len();
        let records: Vec<_> = (0..n).map(|i| listening(&format!("n{i:02}"), "x", 0, 2)).collect();
        let preds: Vec<Prediction> = hits.iter().enumerate()
            .map(|(i, h)| Prediction::new(format!("n{i:02}"), Payload::SelectedIndex(if *h { 0 } else { 1 })))
            .collect();
        let split = DatasetSplit::new(VariantStyle::Original, "nr3d", records.clone());
        let base = listening_accuracy(&preds, &split).unwrap();
        let mut shuffled = records;
        shuffled.rotate_left(rot % n);
        let mut rev = preds;
        rev.reverse();
        let other = DatasetSplit::new(VariantStyle::Original, "nr3d", shuffled);
        prop_assert_eq!(base, listening_accuracy(&rev, &other).unwrap());
    }

    #[test]
    fn bleu_is_bounded_and_self_reference_never_hurts(
        cand in proptest::collection::vec(0usize..6, 1..8),
        r in proptest::collection::vec(0usize..6, 1..8),
    ) {
        let w = |v: &[usize]| v.iter().map(|i| WORDS[*i].to_string()).collect::<Vec<_>>();
        let (c, r) = (w(&cand), w(&r));
        let base = bleu1(&c, std::slice::from_ref(&r));
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!(bleu1(&c, &[r, c.clone()]) >= base);
        prop_assert_eq!(bleu1(&c, std::slice::from_ref(&c)), 1.0);
    }

    #[test]
    fn iou_is_symmetric_and_bounded(
        c1 in proptest::array::uniform3(-2.0f64..2.0), s1 in proptest::array::uniform3(0.1f64..3.0),
        c2 in proptest::array::uniform3(-2.0f64..2.0), s2 in proptest::array::uniform3(0.1f64..3.0),
    ) {
        let (a, b) = (Box3D::new(c1, s1), Box3D::new(c2, s2));
        let v = iou3d(&a, &b);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, iou3d(&b, &a));
        prop_assert!((iou3d(&a, &a) - 1.0).abs() < 1e-12);
    }
}
