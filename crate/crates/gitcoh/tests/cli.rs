use std::path::PathBuf;
use std::process::{Command, Output};

use gitcoh::TruncatedSeries;

fn gitcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gitcoh"))
        .args(args)
        .output()
        .unwrap()
}

fn asset(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("assets")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        gitcoh(&["verify", "--worksheet", &asset("sextics_crosscheck.ws")])
            .status
            .code(),
        Some(0)
    );
    let bad = gitcoh(&["verify", "--worksheet", &asset("cubic4fold.ws")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("b_mu"));
    assert_eq!(
        gitcoh(&["verify", "--worksheet", "/nonexistent.ws"])
            .status
            .code(),
        Some(2)
    );

    let dir = std::env::temp_dir().join(format!("gitcoh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let broken = dir.join("broken.ws");
    std::fs::write(
        &broken,
        "[worksheet]\ntitle = x\n\n[step a]\nkind = sum\nterms = nowhere\n",
    )
    .unwrap();
    let out = gitcoh(&["verify", "--worksheet", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));
    let empty = dir.join("empty.ws");
    std::fs::write(
        &empty,
        "[worksheet]\ntitle = x\n\n[step a]\nkind = series_literal\nvalue = 1 [TRIVIAL one]\n",
    )
    .unwrap();
    assert_eq!(
        gitcoh(&["verify", "--worksheet", empty.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn series_subcommand() {
    let out = gitcoh(&[
        "series",
        "(1+t^2+t^10+t^12)/(1-t^4)(1-t^6)",
        "--truncation",
        "12",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "1 + t^2 + t^4 + 2t^6 + 2t^8 + 3t^10 + 4t^12 + O(t^13)"
    );

    let json = gitcoh(&[
        "series",
        "1/(1-t^2)(1-t^4)",
        "--truncation",
        "8",
        "--format",
        "json",
    ]);
    let s: TruncatedSeries = serde_json::from_str(&stdout(&json)).unwrap();
    let text: TruncatedSeries = "1 + t^2 + 2t^4 + 2t^6 + 3t^8 + O(t^9)".parse().unwrap();
    assert_eq!(s, text);

    let err = gitcoh(&["series", "(1+t^2", "--truncation", "4"]);
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn evaluate_one_step_as_json() {
    let out = gitcoh(&[
        "evaluate",
        "--worksheet",
        &asset("cubic4fold.ws"),
        "--step",
        "b_mu",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["name"], "b_mu");
    assert_eq!(v["status"]["status"], "mismatch");
    assert_eq!(v["status"]["degree"], 22);
}

#[test]
fn search_subcommand() {
    let out = gitcoh(&[
        "search",
        "--vars",
        "4",
        "--degree",
        "3",
        "--cutoff",
        "10",
        "--codim-mode",
        "paper",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let codims: Vec<i64> = v["index_vectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|iv| iv["codim_override"]["codim"].as_i64().unwrap())
        .collect();
    assert_eq!(codims, vec![4, 5]);
}
