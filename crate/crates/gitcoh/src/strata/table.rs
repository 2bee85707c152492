//! Stratum codimensions pinned by hand, keyed by the critical monomial
//! support up to permutation of the variables.
//!
//! The root-counting formula `n(beta) - (dim G - dim P_beta)` disagrees with
//! the hand-computed values for some strata of cubics (for example 16 versus
//! 6 for the stratum of cubic fourfolds not involving `x0`). The table lets a
//! computation use the hand values while the root count is always reported
//! next to them.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::weights::{exponent_vectors, ExponentVector};

/// Which stratum codimension drives cutoffs and series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CodimMode {
    /// `n(beta) - (dim G - dim P_beta)` with `P_beta` counted from roots.
    #[default]
    RootCount,
    /// Hand-pinned values from [`override_table`]; when the table has
    /// entries for the problem, only those strata are used.
    Paper,
}

impl std::str::FromStr for CodimMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rootcount" => Ok(CodimMode::RootCount),
            "paper" | "paper_override_table" => Ok(CodimMode::Paper),
            other => Err(format!(
                "unknown codim mode {other:?} (expected rootcount or paper)"
            )),
        }
    }
}

impl std::fmt::Display for CodimMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CodimMode::RootCount => "rootcount",
            CodimMode::Paper => "paper",
        })
    }
}

/// One pinned codimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverrideEntry {
    pub n_vars: usize,
    pub degree: u32,
    /// Critical support in canonical form, see [`canonical_support`].
    pub support: Vec<ExponentVector>,
    pub codim: i64,
    pub note: String,
}

/// Lexicographically smallest sorted exponent list over all permutations of
/// the variables. Two supports are Weyl-equivalent iff their canonical forms
/// agree.
pub fn canonical_support(support: &[ExponentVector]) -> Vec<ExponentVector> {
    let Some(first) = support.first() else {
        return Vec::new();
    };
    let n = first.0.len();
    (0..n)
        .permutations(n)
        .map(|perm| {
            let mut v: Vec<ExponentVector> = support.iter().map(|e| e.permuted(&perm)).collect();
            v.sort();
            v
        })
        .min()
        .unwrap()
}

fn forms_in(n_vars: usize, vars: &[usize], d: u32) -> Vec<ExponentVector> {
    exponent_vectors(vars.len(), d)
        .into_iter()
        .map(|e| {
            let mut full = vec![0; n_vars];
            for (k, &v) in vars.iter().enumerate() {
                full[v] = e.0[k];
            }
            ExponentVector(full)
        })
        .collect()
}

fn entry(
    n_vars: usize,
    degree: u32,
    support: Vec<ExponentVector>,
    codim: i64,
    note: &str,
) -> OverrideEntry {
    OverrideEntry {
        n_vars,
        degree,
        support: canonical_support(&support),
        codim,
        note: note.to_string(),
    }
}

/// The pinned codimensions for cubics in four, five and six variables.
pub fn override_table() -> Vec<OverrideEntry> {
    vec![
        entry(
            6,
            3,
            forms_in(6, &[1, 2, 3, 4, 5], 3),
            6,
            "cubic fourfolds without x0; root count gives 16",
        ),
        entry(
            5,
            3,
            forms_in(5, &[1, 2, 3, 4], 3),
            6,
            "cubic threefolds, first contributing stratum; root count gives 11",
        ),
        entry(
            5,
            3,
            forms_in(5, &[1, 2, 3], 3),
            16,
            "cubic threefolds, plane-cubic stratum; root count gives 19",
        ),
        entry(
            4,
            3,
            forms_in(4, &[1, 2, 3], 3),
            4,
            "cubic surfaces, plane-cubic stratum; root count gives 7",
        ),
        entry(
            4,
            3,
            vec![
                ExponentVector(vec![2, 0, 0, 1]),
                ExponentVector(vec![1, 2, 0, 0]),
                ExponentVector(vec![1, 1, 1, 0]),
                ExponentVector(vec![1, 0, 2, 0]),
            ],
            5,
            "cubic surfaces, second stratum; root count gives 8",
        ),
    ]
}

/// Pinned entries for one `(n_vars, degree)` problem.
pub fn overrides_for(n_vars: usize, degree: u32) -> Vec<OverrideEntry> {
    override_table()
        .into_iter()
        .filter(|e| e.n_vars == n_vars && e.degree == degree)
        .collect()
}

/// Pinned codimension of a support, if any.
pub fn lookup_override(
    n_vars: usize,
    degree: u32,
    support: &[ExponentVector],
) -> Option<OverrideEntry> {
    let canon = canonical_support(support);
    overrides_for(n_vars, degree)
        .into_iter()
        .find(|e| e.support == canon)
}

/// One row of the hand-computed list of index vectors for `SL(5)` on cubic
/// threefolds, with the variables named `x0..x4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldRow {
    pub row: usize,
    /// The index vector as printed, on the last four coordinates.
    pub printed_beta: String,
    pub support: Vec<ExponentVector>,
    /// Whether the printed list says the stratum contributes.
    pub contributes: bool,
}

fn monomial(n_vars: usize, s: &str) -> ExponentVector {
    let mut e = vec![0; n_vars];
    for f in s.split('*') {
        let (v, k) = f.split_once('^').unwrap_or((f, "1"));
        let i: usize = v.trim_start_matches('x').parse().expect("variable index");
        e[i] += k.parse::<u32>().expect("exponent");
    }
    ExponentVector(e)
}

/// The eight printed rows for cubic threefolds.
pub fn threefold_table() -> Vec<ThreefoldRow> {
    let row = |row: usize, beta: &str, support: Vec<ExponentVector>| ThreefoldRow {
        row,
        printed_beta: beta.to_string(),
        support,
        contributes: row == 1 || row == 6,
    };
    let list = |ms: &[&str]| ms.iter().map(|m| monomial(5, m)).collect::<Vec<_>>();
    let mut row3 = forms_in(5, &[2, 3, 4], 2)
        .into_iter()
        .map(|mut e| {
            e.0[1] += 1;
            e
        })
        .collect::<Vec<_>>();
    row3.push(monomial(5, "x0*x1^2"));
    vec![
        row(1, "(0.25,0.25,0.25,0.25)", forms_in(5, &[1, 2, 3, 4], 3)),
        row(
            2,
            "(0.9,0.8,0.7,0.6)",
            list(&["x1*x2^2", "x1*x3^2", "x1*x2*x4"]),
        ),
        row(3, "(1,0,0,0)", row3),
        row(
            4,
            "(1,1,0.5,0.5)",
            list(&[
                "x1^2*x3", "x2^2*x3", "x1*x2*x3", "x1^2*x4", "x2^2*x4", "x1*x2*x4",
            ]),
        ),
        row(
            5,
            "(1.08,0.84,0.72,0.36)",
            list(&["x2^3", "x1*x3^2", "x1^2*x4"]),
        ),
        row(6, "(1,1,1,0)", forms_in(5, &[1, 2, 3], 3)),
        row(
            7,
            "(1.2,0.9,0.6,0.3)",
            list(&["x2^3", "x1*x2*x3", "x1^2*x4"]),
        ),
        row(
            8,
            "(1.25,0.75,0.75,0.25)",
            list(&["x1^2*x4", "x1*x2*x3", "x1*x2^2", "x1*x3^2"]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_ignores_variable_names() {
        let a = vec![ExponentVector(vec![0, 2, 1]), ExponentVector(vec![0, 1, 2])];
        let b = vec![ExponentVector(vec![1, 0, 2]), ExponentVector(vec![2, 0, 1])];
        assert_eq!(canonical_support(&a), canonical_support(&b));
    }

    #[test]
    fn threefold_rows() {
        let rows = threefold_table();
        assert_eq!(rows.len(), 8);
        assert_eq!(
            rows.iter().map(|r| r.support.len()).collect::<Vec<_>>(),
            [20, 3, 7, 6, 3, 10, 3, 4]
        );
        assert!(rows
            .iter()
            .all(|r| r.support.iter().all(|e| e.degree() == 3 && e.0.len() == 5)));
        assert_eq!(
            rows.iter()
                .filter(|r| r.contributes)
                .map(|r| r.row)
                .collect::<Vec<_>>(),
            [1, 6]
        );
        assert_eq!(monomial(5, "x0*x1^2"), ExponentVector(vec![1, 2, 0, 0, 0]));
    }

    #[test]
    fn lookups() {
        let s = forms_in(6, &[0, 1, 2, 4, 5], 3);
        assert_eq!(lookup_override(6, 3, &s).unwrap().codim, 6);
        assert!(lookup_override(6, 3, &forms_in(6, &[0, 1, 2], 3)).is_none());
        assert_eq!(overrides_for(4, 3).len(), 2);
        assert_eq!("paper".parse::<CodimMode>().unwrap(), CodimMode::Paper);
    }
}
