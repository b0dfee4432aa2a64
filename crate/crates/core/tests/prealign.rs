mod common;

use common::listening;
use langrobust::prealign::{
    exemplar_skeleton, fallback_count, normalize, normalize_split, render_prealign_prompt, PrealignConfig, MEANING_RULE,
};
use langrobust::providers::mock::{apply_mock_rule, ScriptedChatProvider};
use langrobust::providers::{DiskCache, MockChatProvider, MockKind, Role};
use langrobust::{DatasetSplit, VariantStyle};

fn split(sentences: &[&str]) -> DatasetSplit {
    let records = sentences.iter().enumerate().map(|(i, s)| listening(&format!("r{i:02}"), s, 0, 2)).collect();
    DatasetSplit::new(VariantStyle::Syntax, "nr3d", records)
}

const TEMPLATES: &[&str] = &[
    "The lamp is on the desk, by the bed.",
    "Facing the door, pick the tall cabinet.",
    "The brown chair, next to the window.",
    "It is the trash can, under the sink.",
];

#[test]
fn inverse_syntax_restores_mock_syntax() {
    let config = PrealignConfig::bundled();
    let rewritten: Vec<String> = TEMPLATES.iter().map(|s| apply_mock_rule(MockKind::Syntax, s)).collect();
    let input = split(&rewritten.iter().map(String::as_str).collect::<Vec<_>>());
    let provider = MockChatProvider::new(MockKind::InverseSyntax, 0);
    let out = normalize_split(&input, &config, &provider, None);
    for (r, want) in out.records.iter().zip(TEMPLATES) {
        assert_eq!(r.sentence, *want);
    }
    assert_eq!(fallback_count(&out), 0);
    out.validate().unwrap();
}

#[test]
fn split_equals_per_record_normalization() {
    let config = PrealignConfig { workers: 3, ..PrealignConfig::bundled() };
    let input = split(TEMPLATES);
    let provider = MockChatProvider::new(MockKind::Tone, 0);
    let out = normalize_split(&input, &config, &provider, None);
    assert_eq!(out.ids().collect::<Vec<_>>(), input.ids().collect::<Vec<_>>());
    assert_eq!(out.style, input.style);
    for (o, i) in out.records.iter().zip(&input.records) {
        assert_eq!(o.sentence, normalize(&i.sentence, &config, &provider, None).sentence);
    }
    let again = normalize_split(&input, &config, &provider, None);
    assert_eq!(out, again);
}

#[test]
fn empty_split_stays_empty() {
    let provider = MockChatProvider::new(MockKind::Identity, 0);
    let out = normalize_split(&split(&[]), &PrealignConfig::bundled(), &provider, None);
    assert!(out.is_empty());
    assert_eq!(provider.calls(), 0);
}

#[test]
fn failures_fall_back_to_the_exact_input() {
    let config = PrealignConfig::bundled();
    let odd = "  the  chair ,by the door!!  ";
    let p = ScriptedChatProvider::replies(["not json"]);
    let n = normalize(odd, &config, &p, None);
    assert!(n.fallback);
    assert_eq!(n.sentence, odd);
    assert_eq!(p.calls() as u32, config.max_retries + 1);

    let p = ScriptedChatProvider::new(vec![Err("offline".into())]);
    let out = normalize_split(&split(&["A chair."]), &config, &p, None);
    assert_eq!(out.records[0].sentence, "A chair.");
    assert_eq!(fallback_count(&out), 1);
}

#[test]
fn successes_are_cached_and_failures_are_not() {
    let dir = tempfile::tempdir().unwrap();
    let cache = DiskCache::open(dir.path()).unwrap();
    let config = PrealignConfig::bundled();

    let bad = ScriptedChatProvider::replies(["nope"]);
    assert!(normalize("the chair", &config, &bad, Some(&cache)).fallback);
    assert!(cache.is_empty());

    let good = MockChatProvider::new(MockKind::Accent, 0);
    let first = normalize("the chair", &config, &good, Some(&cache));
    let second = normalize("the chair", &config, &good, Some(&cache));
    assert!(!first.cached && second.cached);
    assert_eq!(first.sentence, second.sentence);
    assert_eq!(good.calls(), 1);
}

#[test]
fn prompt_layout() {
    let config = PrealignConfig::bundled();
    let msgs = render_prealign_prompt(&config, "find the chair");
    assert_eq!(msgs[0].role, Role::System);
    assert!(msgs[0].content.contains(MEANING_RULE));
    assert!(msgs[0].content.contains("[In-Context Examples]"));
    assert_eq!(msgs.last().unwrap().role, Role::User);
    assert!(msgs.last().unwrap().content.contains("find the chair"));
}

#[test]
fn exemplar_skeleton_is_seeded() {
    let training = split(TEMPLATES);
    let a = exemplar_skeleton(&training, 3, 9);
    assert_eq!(a, exemplar_skeleton(&training, 3, 9));
    assert_eq!(a.len(), 3);
    assert!(a.iter().all(|e| e.source.is_empty() && TEMPLATES.contains(&e.target.as_str())));
}
