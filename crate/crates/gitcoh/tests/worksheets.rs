use std::collections::BTreeSet;
use std::path::PathBuf;

use gitcoh::worksheet::eval::Status;
use gitcoh::worksheet::{
    evaluate_worksheet, parse_worksheet, serialize_worksheet, Source, StepKind, Worksheet,
};

const ASSETS: [&str; 4] = [
    "cubic4fold",
    "planecubic",
    "cubicsurface",
    "sextics_crosscheck",
];

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(sub)
}

fn load(name: &str) -> Worksheet {
    let text = std::fs::read_to_string(dir("assets").join(format!("{name}.ws"))).unwrap();
    parse_worksheet(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn mismatched(name: &str) -> BTreeSet<String> {
    let report = evaluate_worksheet(&load(name)).unwrap();
    report.mismatches().map(|s| s.name.clone()).collect()
}

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn assets_round_trip_through_the_serializer() {
    for name in ASSETS {
        let ws = load(name);
        let again = parse_worksheet(&serialize_worksheet(&ws)).unwrap();
        assert_eq!(again, ws, "{name}");
    }
}

#[test]
fn fourfold_worksheet_shape() {
    let ws = load("cubic4fold");
    let counts: std::collections::BTreeMap<_, _> = ws.kind_counts().into_iter().collect();
    assert_eq!(counts["blowup_correction"], 8);
    assert_eq!(counts["ic_blowdown"], 6);
    assert_eq!(counts["equivariant_ss"], 2);
    assert_eq!(counts["decomp_pbundle"], 2);
    assert_eq!(counts["decomp_semismall"], 8);
    assert_eq!(ws.truncation, 20);
    assert!(ws.has_goldens());
}

#[test]
fn every_cited_value_carries_a_citation() {
    for name in ASSETS {
        let text = serialize_worksheet(&load(name));
        for line in text.lines().filter(|l| l.contains("[PAPER")) {
            assert!(line.trim_end().ends_with("\"]"), "{name}: {line}");
        }
    }
    let ws = load("cubic4fold");
    let a1 = ws.step("a1").unwrap();
    let StepKind::BlowupCorrection { d_r, .. } = &a1.kind else {
        panic!("a1 kind")
    };
    assert_eq!(d_r.value, 27);
    assert!(
        matches!(&d_r.source, Some(Source::Cited { citation, .. }) if citation.contains("t^{56}"))
    );
}

#[test]
fn fourfold_mismatches_are_the_documented_ones() {
    assert_eq!(
        mismatched("cubic4fold"),
        set(&[
            "mtilde_half",
            "mtilde",
            "b_mu",
            "b_tau",
            "mhat",
            "bb",
            "bb_full"
        ])
    );
}

#[test]
fn fourfold_flags_the_blowdown_typos_at_their_degrees() {
    let report = evaluate_worksheet(&load("cubic4fold")).unwrap();
    let at = |n: &str| match report.step(n).unwrap().status {
        Status::Mismatch { degree, .. } => degree,
        _ => panic!("{n} should mismatch"),
    };
    assert_eq!(at("b_mu"), 22);
    assert_eq!(at("b_tau"), 18);
    assert_eq!(at("mtilde_half"), 20);
    assert_eq!(at("bb_full"), 36);
    let half = &report.step("mtilde_half").unwrap().series;
    assert_eq!(
        half.even_ints().unwrap(),
        vec![1, 9, 26, 51, 81, 115, 152, 193, 236, 280, 325]
    );
}

#[test]
fn small_worksheets() {
    assert_eq!(mismatched("planecubic"), set(&["plane", "beta1"]));
    assert_eq!(mismatched("cubicsurface"), set(&["beta2", "surfaces"]));
    assert!(mismatched("sextics_crosscheck").is_empty());
}

// Set GITCOH_BLESS=1 to rewrite the stored reports.
#[test]
fn reports_match_stored_json() {
    for name in ASSETS {
        let report = evaluate_worksheet(&load(name)).unwrap().without_timing();
        let path = dir("tests/golden").join(format!("{name}.json"));
        let json = report.to_json();
        if std::env::var_os("GITCOH_BLESS").is_some() {
            std::fs::write(&path, &json).unwrap();
            continue;
        }
        let stored =
            std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        let a: serde_json::Value = serde_json::from_str(&stored).unwrap();
        let b: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
