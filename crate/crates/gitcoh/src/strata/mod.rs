//! Kirwan index vectors of `SL(n)` acting on degree-`d` forms.
//!
//! [`index_set_search`] enumerates every nonzero dominant vector that is the
//! nearest point to the origin of the convex hull of some set of monomial
//! weights, computes its critical supports and both codimension
//! conventions, and decides whether the critical set has semistable points.

pub mod affine;
pub mod hull;
pub mod levi;
pub mod table;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hull::{face_enumeration, nearest_point_hull, HullCertificate};
pub use levi::{LeviProblem, LeviStratum, SearchOptions};
pub use table::{
    canonical_support, lookup_override, override_table, overrides_for, threefold_table, CodimMode,
    OverrideEntry, ThreefoldRow,
};

use crate::series::Rational;
use crate::weights::{
    chamber_sort, dim_g, dim_x, enumerate_monomials, inner, pairing_supports, parabolic_dim,
    ExponentVector, WeightTable, WeightVector, WeightsError,
};

#[derive(Debug, Error)]
pub enum StrataError {
    #[error("codimension cutoff must be nonnegative, got {0}")]
    NegativeCutoff(i64),
    #[error("need at least two variables and positive degree, got n_vars={0}, d={1}")]
    BadProblem(usize, u32),
    #[error("certificate for beta {0} does not verify")]
    Certificate(String),
    #[error("inconsistent supports: {0}")]
    InconsistentSupports(String),
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error("semistability check failed: {0}")]
    Levi(String),
}

/// Outcome of the torus 0-in-hull test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum TorusTest {
    /// `0` lies in the hull; the certificate writes it as a convex combination.
    Semistable { certificate: HullCertificate },
    /// `lambda` pairs strictly positively with every weight, so the
    /// one-parameter subgroup it spans destabilises a generic point.
    Unstable {
        lambda: WeightVector,
        certificate: HullCertificate,
    },
}

impl TorusTest {
    pub fn is_semistable(&self) -> bool {
        matches!(self, TorusTest::Semistable { .. })
    }

    /// Re-checks the returned certificate exactly.
    pub fn verify(&self, weights: &[WeightVector]) -> bool {
        match self {
            TorusTest::Semistable { certificate } => {
                certificate.point.is_zero() && certificate.verify(weights)
            }
            TorusTest::Unstable {
                lambda,
                certificate,
            } => {
                certificate.verify(weights)
                    && &certificate.point == lambda
                    && weights.iter().all(|w| {
                        inner(lambda, w)
                            .map(|v| v > Rational::zero())
                            .unwrap_or(false)
                    })
            }
        }
    }
}

/// Hilbert–Mumford test for a generic point with the given torus weights:
/// semistable iff `0` is in the convex hull.
///
/// # Panics
/// Panics on an empty weight set.
pub fn generic_torus_semistable(weights: &[WeightVector]) -> TorusTest {
    let certificate = nearest_point_hull(weights);
    if certificate.point.is_zero() {
        TorusTest::Semistable { certificate }
    } else {
        TorusTest::Unstable {
            lambda: certificate.point.clone(),
            certificate,
        }
    }
}

/// A pinned codimension with its note.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimOverride {
    pub codim: i64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexVector {
    pub beta: WeightVector,
    pub norm_sq: Rational,
    pub z_support: Vec<usize>,
    pub y_support: Vec<usize>,
    pub n_beta: usize,
    pub dim_p_beta: usize,
    pub codim_rootcount: i64,
    pub codim_override: Option<CodimOverride>,
    /// Whether the critical set has semistable points for the Levi factor,
    /// decided by the constant term of its equivariant series.
    pub nonempty_ss: bool,
    /// 0-in-hull test of the critical weights projected orthogonally to beta.
    pub torus_test: TorusTest,
    /// Witness that beta is the nearest point of the hull of its critical weights.
    pub certificate: HullCertificate,
}

impl IndexVector {
    pub fn codim(&self, mode: CodimMode) -> i64 {
        match (mode, &self.codim_override) {
            (CodimMode::Paper, Some(o)) => o.codim,
            _ => self.codim_rootcount,
        }
    }

    pub fn z_monomials<'a>(&self, table: &'a WeightTable) -> Vec<&'a ExponentVector> {
        self.z_support
            .iter()
            .map(|&i| &table.entries[i].0)
            .collect()
    }
}

/// Codimension of a stratum, computed as `dim X - dim S_beta` and checked
/// against `n(beta) - (dim G - dim P_beta)`.
pub fn stratum_codim(iv: &IndexVector, n_vars: usize, d: u32) -> Result<i64, StrataError> {
    let total = dim_x(n_vars, d) as i64 + 1;
    if iv.y_support.len() < iv.z_support.len() || iv.z_support.is_empty() {
        return Err(StrataError::InconsistentSupports(format!(
            "|Y|={} |Z|={}",
            iv.y_support.len(),
            iv.z_support.len()
        )));
    }
    if iv.n_beta as i64 + iv.y_support.len() as i64 != total {
        return Err(StrataError::InconsistentSupports(format!(
            "n_beta + |Y| = {} but there are {total} monomials",
            iv.n_beta + iv.y_support.len()
        )));
    }
    let dim_s = dim_g(n_vars) as i64 + (iv.y_support.len() as i64 - 1) - iv.dim_p_beta as i64;
    let a = dim_x(n_vars, d) as i64 - dim_s;
    let b = iv.n_beta as i64 - (dim_g(n_vars) as i64 - iv.dim_p_beta as i64);
    if a != b {
        return Err(StrataError::InconsistentSupports(format!(
            "codimension formulas disagree: {a} vs {b}"
        )));
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParameters {
    pub n_vars: usize,
    pub degree: u32,
    pub codim_cutoff: Option<i64>,
    pub codim_mode: CodimMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratificationReport {
    pub parameters: SearchParameters,
    pub table: WeightTable,
    pub index_vectors: Vec<IndexVector>,
    /// Number of distinct dominant candidates before mode and cutoff filters.
    pub candidates: usize,
}

/// Builds the index vector of `beta` (true, unscaled coordinates).
pub fn index_vector_for(
    table: &WeightTable,
    beta: &WeightVector,
) -> Result<IndexVector, StrataError> {
    let (beta, _) = chamber_sort(beta);
    let sup = pairing_supports(table, &beta)?;
    let dim_p = parabolic_dim(&beta)?;
    let n = table.n_vars;
    let codim_rootcount = sup.n_beta as i64 - (dim_g(n) as i64 - dim_p as i64);
    let z_mon: Vec<ExponentVector> = sup
        .z_support
        .iter()
        .map(|&i| table.entries[i].0.clone())
        .collect();
    let codim_override = lookup_override(n, table.degree, &z_mon).map(|e| CodimOverride {
        codim: e.codim,
        note: e.note,
    });
    let z_weights: Vec<WeightVector> = sup
        .z_support
        .iter()
        .map(|&i| table.entries[i].1.clone())
        .collect();
    let local = nearest_point_hull(&z_weights);
    if local.point != beta || !local.verify(&z_weights) {
        return Err(StrataError::Certificate(beta.to_string()));
    }
    let certificate = HullCertificate {
        point: local.point,
        barycentric: local
            .barycentric
            .into_iter()
            .map(|(k, l)| (sup.z_support[k], l))
            .collect(),
    };
    let projected: Vec<WeightVector> = z_weights.iter().map(|w| w.sub(&beta)).collect();
    let torus_test = generic_torus_semistable(&projected);
    let nonempty_ss = levi_nonempty(table, &beta)?;
    Ok(IndexVector {
        norm_sq: beta.norm_sq(),
        beta,
        z_support: sup.z_support,
        y_support: sup.y_support,
        n_beta: sup.n_beta,
        dim_p_beta: dim_p,
        codim_rootcount,
        codim_override,
        nonempty_ss,
        torus_test,
        certificate,
    })
}

/// Scales `beta` to the integer coordinates of [`WeightTable::integer_weights`].
pub fn scaled_fraction(n_vars: usize, beta: &WeightVector) -> (Vec<i128>, i128) {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let mut den = BigInt::from(1);
    for c in &beta.coords {
        den = den.lcm(c.denom());
    }
    let num: Vec<i128> = beta
        .coords
        .iter()
        .map(|c| {
            (c * Rational::from_integer(den.clone()) * Rational::from_integer(BigInt::from(n_vars)))
                .to_integer()
                .to_i128()
                .expect("beta fits in i128")
        })
        .collect();
    affine::reduce(&num, den.to_i128().expect("denominator fits in i128"))
}

/// Decides whether the critical set of `beta` has Levi-semistable points,
/// using the constant term of its equivariant series.
pub fn levi_nonempty(table: &WeightTable, beta: &WeightVector) -> Result<bool, StrataError> {
    let problem = LeviProblem::special_linear(table.integer_weights());
    let (num, den) = scaled_fraction(table.n_vars, beta);
    let st = problem.stratum(&num, den);
    let sub = problem
        .critical_subproblem(&st)
        .map_err(|e| StrataError::Levi(e.to_string()))?;
    let s = crate::kirwan::levi_series(&sub, 0).map_err(|e| StrataError::Levi(e.to_string()))?;
    Ok(!s.coeff(0).is_zero())
}

/// Enumerates the index set for `SL(n_vars)` on degree-`d` forms.
///
/// In [`CodimMode::Paper`] only strata with a pinned codimension are kept
/// when the problem has pinned entries. `cutoff` bounds the codimension of
/// the selected mode.
pub fn index_set_search(
    n_vars: usize,
    d: u32,
    cutoff: Option<i64>,
    mode: CodimMode,
    opts: SearchOptions,
) -> Result<StratificationReport, StrataError> {
    if let Some(c) = cutoff {
        if c < 0 {
            return Err(StrataError::NegativeCutoff(c));
        }
    }
    if n_vars < 2 || d < 1 {
        return Err(StrataError::BadProblem(n_vars, d));
    }
    let table = enumerate_monomials(n_vars, d);
    let problem = LeviProblem::special_linear(table.integer_weights());
    let candidates = problem.index_vectors(opts);
    let restrict = mode == CodimMode::Paper && !overrides_for(n_vars, d).is_empty();
    let mut keep = Vec::new();
    for (num, den) in &candidates {
        let st = problem.stratum(num, *den);
        let beta = WeightVector::new(affine::to_rationals(num, den * n_vars as i128));
        let z_mon: Vec<ExponentVector> = st.z.iter().map(|&i| table.entries[i].0.clone()).collect();
        let pinned = lookup_override(n_vars, d, &z_mon);
        if restrict && pinned.is_none() {
            continue;
        }
        let selected = match (mode, &pinned) {
            (CodimMode::Paper, Some(p)) => p.codim,
            _ => st.codim(),
        };
        if cutoff.is_some_and(|c| selected > c) {
            continue;
        }
        keep.push(beta);
    }
    let mut index_vectors = keep
        .iter()
        .map(|b| index_vector_for(&table, b))
        .collect::<Result<Vec<_>, _>>()?;
    index_vectors.sort_by(|a, b| {
        a.codim(mode)
            .cmp(&b.codim(mode))
            .then_with(|| a.norm_sq.cmp(&b.norm_sq))
            .then_with(|| a.z_support.cmp(&b.z_support))
    });
    Ok(StratificationReport {
        parameters: SearchParameters {
            n_vars,
            degree: d,
            codim_cutoff: cutoff,
            codim_mode: mode,
        },
        table,
        index_vectors,
        candidates: candidates.len(),
    })
}

/// JSON-friendly view of a report: rationals as `"p/q"` strings and
/// monomials by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportView {
    pub n_vars: usize,
    pub degree: u32,
    pub codim_cutoff: Option<i64>,
    pub codim_mode: CodimMode,
    pub candidates: usize,
    pub index_vectors: Vec<IndexVectorView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexVectorView {
    pub beta: Vec<String>,
    pub norm_sq: String,
    pub z_support: Vec<String>,
    pub y_support_size: usize,
    pub n_beta: usize,
    pub dim_p_beta: usize,
    pub codim_rootcount: i64,
    pub codim_override: Option<CodimOverride>,
    pub nonempty_ss: bool,
    pub torus_semistable: bool,
    pub destabilizing_direction: Option<Vec<i64>>,
    pub barycentric: BTreeMap<String, String>,
}

impl StratificationReport {
    pub fn view(&self) -> ReportView {
        ReportView {
            n_vars: self.parameters.n_vars,
            degree: self.parameters.degree,
            codim_cutoff: self.parameters.codim_cutoff,
            codim_mode: self.parameters.codim_mode,
            candidates: self.candidates,
            index_vectors: self
                .index_vectors
                .iter()
                .map(|iv| IndexVectorView {
                    beta: iv.beta.coords.iter().map(|c| c.to_string()).collect(),
                    norm_sq: iv.norm_sq.to_string(),
                    z_support: self.table.names(&iv.z_support),
                    y_support_size: iv.y_support.len(),
                    n_beta: iv.n_beta,
                    dim_p_beta: iv.dim_p_beta,
                    codim_rootcount: iv.codim_rootcount,
                    codim_override: iv.codim_override.clone(),
                    nonempty_ss: iv.nonempty_ss,
                    torus_semistable: iv.torus_test.is_semistable(),
                    destabilizing_direction: match &iv.torus_test {
                        TorusTest::Unstable { lambda, .. } => {
                            Some(crate::weights::primitive_integral(lambda))
                        }
                        TorusTest::Semistable { .. } => None,
                    },
                    barycentric: iv
                        .certificate
                        .barycentric
                        .iter()
                        .map(|(&k, l)| (self.table.entries[k].0.to_string(), l.to_string()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.view()).expect("report view serializes")
    }

    /// Plain-text table, one line per index vector.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "n_vars={} degree={} mode={} cutoff={} candidates={} kept={}\n",
            self.parameters.n_vars,
            self.parameters.degree,
            self.parameters.codim_mode,
            self.parameters
                .codim_cutoff
                .map_or("none".to_string(), |c| c.to_string()),
            self.candidates,
            self.index_vectors.len()
        );
        for iv in &self.index_vectors {
            let pinned = iv
                .codim_override
                .as_ref()
                .map_or("-".to_string(), |o| o.codim.to_string());
            let names = self.table.names(&iv.z_support);
            let shown = if names.len() > 6 {
                format!("{} ... ({} monomials)", names[..6].join(" "), names.len())
            } else {
                names.join(" ")
            };
            out.push_str(&format!(
                "codim {:>3} (pinned {:>2})  ss={}  beta={}  Z: {}\n",
                iv.codim_rootcount,
                pinned,
                if iv.nonempty_ss { "yes" } else { "no " },
                iv.beta,
                shown
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::frac;

    #[test]
    fn omit_x0_vector_is_pinned_at_six() {
        let table = enumerate_monomials(6, 3);
        let beta = WeightVector::new(vec![
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
            frac(-1, 2),
        ]);
        let iv = index_vector_for(&table, &beta).unwrap();
        assert_eq!(iv.z_support.len(), 35);
        assert_eq!(iv.codim_rootcount, 16);
        assert_eq!(iv.codim_override.as_ref().unwrap().codim, 6);
        assert_eq!(stratum_codim(&iv, 6, 3).unwrap(), 16);
        assert!(iv.nonempty_ss);
    }

    #[test]
    fn negative_cutoff_is_rejected() {
        let e = index_set_search(
            3,
            3,
            Some(-1),
            CodimMode::RootCount,
            SearchOptions::default(),
        );
        assert!(matches!(e, Err(StrataError::NegativeCutoff(-1))));
    }

    #[test]
    fn torus_test_on_symmetric_weights() {
        let w = vec![
            WeightVector::from_ints(&[1, -1]),
            WeightVector::from_ints(&[-1, 1]),
        ];
        let t = generic_torus_semistable(&w);
        assert!(t.is_semistable());
        assert!(t.verify(&w));
        let w = vec![
            WeightVector::from_ints(&[2, -1, -1]),
            WeightVector::from_ints(&[1, 0, -1]),
        ];
        let t = generic_torus_semistable(&w);
        assert!(!t.is_semistable());
        assert!(t.verify(&w));
    }
}
