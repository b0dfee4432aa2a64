mod common;

use common::{code, fixture, run, s, sentences, write_predictions};

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["assess", "--help"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["generate", "--bogus"])), 1);
    // sampling needs a seed
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--out-dir", s(dir.path()), "subsample", "--input", s(&fixture("original.jsonl")), "--fraction", "0.5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    // pre-alignment takes exactly one mock
    let out = run(&["--mock-provider", "syntax,tone", "--out-dir", s(dir.path()), "prealign", "--input", s(&fixture("original.jsonl"))]);
    assert_eq!(code(&out), 1);
}

#[test]
fn validation_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.jsonl");
    let out = run(&["--out-dir", s(dir.path()), "subsample", "--input", s(&missing), "--fraction", "0.5", "--seed", "1"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.jsonl"));

    let out = run(&["--seed", "1", "--out-dir", s(dir.path()), "subsample", "--input", s(&fixture("original.jsonl")), "--fraction", "1.5"]);
    assert_eq!(code(&out), 3);

    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"id\": 1}\n").unwrap();
    let out = run(&["--out-dir", s(dir.path()), "diversity", "--inputs", s(&bad)]);
    assert_eq!(code(&out), 3);

    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"embedding_table": "absent.txt"}"#).unwrap();
    assert_eq!(code(&run(&["--config", s(&cfg), "diversity", "--inputs", s(&fixture("original.jsonl"))])), 3);
}

#[test]
fn unreachable_provider_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"provider": {"base_url": "http://127.0.0.1:9/v1", "max_attempts": 1}, "seed": 1, "generation": {"workers": 1}}"#,
    )
    .unwrap();
    let out = run(&[
        "--config",
        s(&cfg),
        "--out-dir",
        s(dir.path()),
        "generate",
        "--input",
        s(&fixture("original.jsonl")),
        "--styles",
        "tone",
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generation_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = run(&["--seed", "5", "--mock-provider", "all", "--out-dir", s(d.path()), "generate", "--input", s(&fixture("original.jsonl"))]);
        assert_eq!(code(&out), 0);
    }
    for style in ["syntax", "voice", "modifier", "accent", "tone"] {
        let x = std::fs::read(a.path().join(format!("{style}.jsonl"))).unwrap();
        let y = std::fs::read(b.path().join(format!("{style}.jsonl"))).unwrap();
        assert_eq!(x, y, "{style}");
        assert_eq!(sentences(&a.path().join(format!("{style}.jsonl"))).len(), 50);
    }
    let tone = sentences(&a.path().join("tone.jsonl"));
    assert!(tone.iter().all(|t| t.starts_with("could you find ") && t.ends_with('?')));
}

#[test]
fn subsample_and_augment() {
    let dir = tempfile::tempdir().unwrap();
    let d = s(dir.path());
    let input = fixture("original.jsonl");
    let out = run(&["--seed", "2", "--out-dir", d, "subsample", "--input", s(&input), "--fraction", "0.25", "--stratify"]);
    assert_eq!(code(&out), 0);
    let first = std::fs::read(dir.path().join("original.subsample.jsonl")).unwrap();
    assert_eq!(sentences(&dir.path().join("original.subsample.jsonl")).len(), 13);
    run(&["--seed", "2", "--out-dir", d, "subsample", "--input", s(&input), "--fraction", "0.25", "--stratify"]);
    assert_eq!(first, std::fs::read(dir.path().join("original.subsample.jsonl")).unwrap());

    assert_eq!(code(&run(&["--seed", "2", "--mock-provider", "all", "--out-dir", d, "generate", "--input", s(&input)])), 0);
    let variants: Vec<String> =
        ["syntax", "voice", "modifier", "accent", "tone"].iter().map(|v| format!("{d}/{v}.jsonl")).collect();
    let mut args = vec!["--seed", "2", "--out-dir", d, "augment", "--original", s(&input), "--mode", "balanced", "--variants"];
    args.extend(variants.iter().map(String::as_str));
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(sentences(&dir.path().join("augmented.balanced.jsonl")).len(), 50);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("augmented.balanced.json")).unwrap()).unwrap();
    assert!(summary.to_string().contains("10"));

    args[8] = "merged";
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(sentences(&dir.path().join("augmented.merged.jsonl")).len(), 100);
}

#[test]
fn evaluate_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = s(dir.path());
    let input = fixture("original.jsonl");
    let preds = dir.path().join("p.jsonl");
    write_predictions(&input, 30, &preds);
    let orig = format!("{}={}", s(&input), s(&preds));
    let out = run(&["--json", "--out-dir", d, "evaluate", "--metric", "acc", "--original", &orig]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("0.6"));
    assert!(dir.path().join("evaluation.json").exists());
    // without all five variants there is no robustness table
    assert!(!dir.path().join("robustness.csv").exists());

    let wrong = dir.path().join("w.jsonl");
    std::fs::write(&wrong, "{\"record_id\": \"x\", \"selected_index\": 0}\n").unwrap();
    let bad = format!("{}={}", s(&input), s(&wrong));
    assert_eq!(code(&run(&["--out-dir", d, "evaluate", "--metric", "acc", "--original", &bad])), 3);
    assert_eq!(code(&run(&["--out-dir", d, "evaluate", "--metric", "nope", "--original", &orig])), 1);
}

#[test]
fn probe_from_csv_exports() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, flip: bool| {
        let mut t = String::from("stage,f1,f2,f3\n");
        for i in 0..20 {
            let sign = if flip && i < 4 { -1.0 } else { 1.0 };
            t.push_str(&format!("id{i},{},{},{}\n", sign * (1.0 + i as f64), sign * 0.5, sign * (i % 3) as f64));
        }
        let p = dir.path().join(name);
        std::fs::write(&p, t).unwrap();
        p
    };
    let (po, pv, qo, qv) = (write("po.csv", false), write("pv.csv", false), write("qo.csv", false), write("qv.csv", true));
    let out = run(&[
        "--json", "--out-dir", s(dir.path()), "probe",
        "--pre-original", s(&po), "--pre-variant", s(&pv), "--post-original", s(&qo), "--post-variant", s(&qv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mass_shift_below_tau"].as_f64().unwrap(), 0.2);
    for f in ["probe.json", "probe.pre.pdf.csv", "probe.post.pdf.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}
