//! One PASS/FAIL line per acceptance criterion, exact comparisons only.
//!
//! Failing criteria are reported but do not fail the run unless
//! `GITCOH_STRICT` is set.

use std::path::PathBuf;
use std::process::ExitCode;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use gitcoh::kirwan::{equivariant_ss_series, stratum_contribution};
use gitcoh::series::{duality_complete, expand_rational, first_difference, is_palindromic};
use gitcoh::strata::{
    canonical_support, face_enumeration, index_set_search, nearest_point_hull, stratum_codim,
    threefold_table, CodimMode, SearchOptions,
};
use gitcoh::weights::{ExponentVector, WeightVector};
use gitcoh::worksheet::eval::{Report, Status};
use gitcoh::worksheet::{evaluate_worksheet, parse_worksheet};
use gitcoh::TruncatedSeries;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const OPTS: SearchOptions = SearchOptions {
    symmetry: true,
    parallel: true,
};

fn asset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("assets")
        .join(name)
}

fn cubic4fold() -> Report {
    let text = std::fs::read_to_string(asset("cubic4fold.ws")).expect("cubic4fold.ws");
    let ws = parse_worksheet(&text).expect("cubic4fold.ws parses");
    evaluate_worksheet(&ws).expect("cubic4fold.ws evaluates")
}

fn evens(s: &TruncatedSeries, through: usize) -> Vec<i64> {
    s.with_order(through)
        .even_ints()
        .expect("integral even series")
}

fn step_status(report: &Report, name: &str) -> String {
    match &report.step(name).expect("step present").status {
        Status::Match { through } => format!("{name} matches through t^{through}"),
        Status::Mismatch {
            degree,
            computed,
            expected,
        } => format!("{name} differs at t^{degree} ({computed} vs {expected})"),
        Status::None => format!("{name} has no expectation"),
    }
}

fn matches(report: &Report, name: &str) -> bool {
    matches!(
        report.step(name).map(|s| &s.status),
        Some(Status::Match { .. })
    )
}

fn criterion_1() -> Outcome {
    let got = equivariant_ss_series(3, 3, 30, CodimMode::RootCount).unwrap();
    let want = expand_rational(
        &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
        &[(4, 1), (6, 1)],
        30,
    )
    .unwrap();
    match first_difference(&got, &want) {
        None => outcome(
            true,
            "plane cubic series equals the closed form through t^30",
        ),
        Some(k) => outcome(
            false,
            format!(
                "first difference at t^{k}: computed {}, closed form {}",
                got.coeff(k),
                want.coeff(k)
            ),
        ),
    }
}

fn criterion_2() -> Outcome {
    let r = index_set_search(4, 3, None, CodimMode::RootCount, OPTS).unwrap();
    let count = r.index_vectors.len();
    let pinned: Vec<i64> = r
        .index_vectors
        .iter()
        .filter_map(|iv| iv.codim_override.as_ref().map(|o| o.codim))
        .collect();
    let beta2 = r
        .index_vectors
        .iter()
        .find(|iv| iv.codim_override.as_ref().is_some_and(|o| o.codim == 5))
        .expect("second pinned stratum found");
    let series = stratum_contribution(&r.table, &beta2.beta, 20, CodimMode::RootCount).unwrap();
    let target = expand_rational(&[1], &[(2, 1)], 20).unwrap();
    let two = count == 2;
    let ok_beta2 = series == target;
    outcome(
        two && ok_beta2,
        format!(
            "{count} index vectors (pinned codimensions {pinned:?}); beta2 recursion {} 1/(1-t^2), got {series}",
            if ok_beta2 { "equals" } else { "differs from" }
        ),
    )
}

fn criterion_3() -> Outcome {
    let r = index_set_search(5, 3, None, CodimMode::RootCount, OPTS).unwrap();
    let rows = threefold_table();
    let mut notes = Vec::new();
    let mut ok = r.index_vectors.len() == rows.len();
    notes.push(format!("{} index vectors", r.index_vectors.len()));
    for row in &rows {
        let canon = canonical_support(&row.support);
        let found = r.index_vectors.iter().find(|iv| {
            canonical_support(
                &iv.z_monomials(&r.table)
                    .into_iter()
                    .cloned()
                    .collect::<Vec<_>>(),
            ) == canon
        });
        match found {
            Some(iv) => {
                if iv.nonempty_ss != row.contributes {
                    ok = false;
                    notes.push(format!("row {} nonempty={}", row.row, iv.nonempty_ss));
                }
                if !row.contributes && iv.torus_test.is_semistable() {
                    notes.push(format!("row {} has no separating 1-PS", row.row));
                }
            }
            None => {
                ok = false;
                notes.push(format!(
                    "row {} support is not a full critical set",
                    row.row
                ));
            }
        }
    }
    outcome(ok, notes.join("; "))
}

fn criterion_4() -> Outcome {
    let r = index_set_search(6, 3, Some(16), CodimMode::RootCount, OPTS).unwrap();
    let omit: Vec<ExponentVector> = r
        .table
        .monomials()
        .filter(|e| e.0[0] == 0)
        .cloned()
        .collect();
    let canon = canonical_support(&omit);
    let found = r.index_vectors.iter().find(|iv| {
        canonical_support(
            &iv.z_monomials(&r.table)
                .into_iter()
                .cloned()
                .collect::<Vec<_>>(),
        ) == canon
    });
    match found {
        Some(iv) => {
            let pinned = iv.codim_override.as_ref().map(|o| o.codim);
            outcome(
                pinned == Some(6),
                format!(
                    "found, |Z| = {}, root-count codimension {}, pinned {:?}",
                    iv.z_support.len(),
                    iv.codim_rootcount,
                    pinned
                ),
            )
        }
        None => outcome(
            false,
            "no index vector with the 35 monomials omitting one variable",
        ),
    }
}

fn criterion_5(report: &Report) -> Outcome {
    let golden = [1, 9, 26, 51, 81, 115, 152, 193, 236, 280, 324];
    let half = &report.step("mtilde_half").unwrap().series;
    let full = &report.step("mtilde").unwrap().series;
    let got = evens(half, 20);
    let pal = is_palindromic(full);
    let full_ok = matches(report, "mtilde");
    outcome(
        got == golden && pal && full_ok,
        format!(
            "lower half {got:?}; palindrome {pal}; {}",
            step_status(report, "mtilde")
        ),
    )
}

fn criterion_6(report: &Report) -> Outcome {
    let names = ["b_mu", "b_gamma", "b_alpha", "b_delta", "b_tau", "b_xi"];
    let mut flagged = Vec::new();
    for n in names {
        if let Status::Mismatch { degree, .. } = report.step(n).unwrap().status {
            flagged.push((n, degree));
        }
    }
    let ok = flagged == [("b_mu", 22)];
    let desc: Vec<String> = flagged
        .iter()
        .map(|(n, d)| format!("{n} at t^{d}"))
        .collect();
    outcome(ok, format!("flagged: {}", desc.join(", ")))
}

fn criterion_7(report: &Report) -> Outcome {
    let checks = ["mhat", "pe_half", "pe", "bb", "bb_from_printed"];
    let ok = checks.iter().all(|n| matches(report, n));
    let detail: Vec<String> = checks.iter().map(|n| step_status(report, n)).collect();
    outcome(ok, detail.join("; "))
}

fn small_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(-20i64..=20, order + 1)
        .prop_map(move |c| TruncatedSeries::from_ints(&c, order))
}

fn points() -> impl Strategy<Value = Vec<WeightVector>> {
    (1usize..=3).prop_flat_map(|dim| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, dim), 1..=7)
            .prop_map(|ps| ps.iter().map(|p| WeightVector::from_ints(p)).collect())
    })
}

fn config(cases: u32) -> Config {
    Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    }
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let mut runner = TestRunner::new(config(500));
    let hull = runner.run(&points(), |ps| {
        prop_assert_eq!(nearest_point_hull(&ps).point, face_enumeration(&ps).point);
        Ok(())
    });
    ok &= hull.is_ok();
    notes.push(format!(
        "hull oracle {}",
        if hull.is_ok() { "500/500" } else { "failed" }
    ));

    let mut runner = TestRunner::new(config(1000));
    let ring = runner.run(
        &(small_series(8), small_series(8), small_series(8)),
        |(a, b, c)| {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            Ok(())
        },
    );
    ok &= ring.is_ok();
    notes.push(format!(
        "ring axioms {}",
        if ring.is_ok() { "1000/1000" } else { "failed" }
    ));

    let mut runner = TestRunner::new(config(256));
    let dual = runner.run(&(small_series(10), 1usize..=10), |(s, d)| {
        let once = duality_complete(&s.with_order(d), d).unwrap();
        prop_assert_eq!(duality_complete(&once, d).unwrap(), once);
        Ok(())
    });
    ok &= dual.is_ok();
    notes.push(format!(
        "duality idempotence {}",
        if dual.is_ok() { "ok" } else { "failed" }
    ));

    let mut codims = 0;
    for (n, d) in [(3, 3), (4, 3), (5, 3), (2, 6)] {
        let r = index_set_search(n, d, None, CodimMode::RootCount, OPTS).unwrap();
        for iv in &r.index_vectors {
            match stratum_codim(iv, n, d) {
                Ok(c) if c == iv.codim_rootcount => codims += 1,
                _ => ok = false,
            }
        }
        let serial = index_set_search(
            n,
            d,
            None,
            CodimMode::RootCount,
            SearchOptions {
                symmetry: true,
                parallel: false,
            },
        )
        .unwrap();
        if serial.index_vectors != r.index_vectors {
            ok = false;
            notes.push(format!("search ({n},{d}) depends on parallelism"));
        }
    }
    notes.push(format!(
        "codimension formulas agree on {codims} index vectors"
    ));
    outcome(ok, notes.join("; "))
}

fn main() -> ExitCode {
    let report = cubic4fold();
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&report),
        criterion_6(&report),
        criterion_7(&report),
        criterion_8(),
    ];
    for (i, r) in results.iter().enumerate() {
        println!(
            "criterion {}: {}: {}",
            i + 1,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!(
        "{} of {} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed > 0 && std::env::var_os("GITCOH_STRICT").is_some() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
