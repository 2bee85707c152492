//! Equivariant Poincaré series of semistable loci and the blowup and
//! blow-down ledgers built on top of them.
//!
//! The main entry point is [`equivariant_ss_series`], which evaluates
//!
//! ```text
//! P^G(X^ss) = P(X) P(BG) - sum_beta t^(2 codim S_beta) P^Stab(beta)(Z_beta^ss)
//! ```
//!
//! recursively. Every critical set `Z_beta` is again a linear action of a
//! torus times `SL` blocks (the Levi factor of `beta`), so the recursion is
//! run on [`LeviProblem`]s until the torus runs out.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{
    classifying_series, duality_complete, finite_geometric, projective_series, rat,
    GroupDescriptor, ProjSpec, SeriesError, TruncatedSeries,
};
use crate::strata::levi::LeviError;
pub use crate::strata::CodimMode;
use crate::strata::{
    nearest_point_hull, overrides_for, scaled_fraction, LeviProblem, SearchOptions,
};
use crate::weights::{
    enumerate_monomials, level_sets, weight_of, ExponentVector, WeightTable, WeightVector,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KirwanError {
    #[error(transparent)]
    Levi(#[from] LeviError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("need at least two variables and positive degrees")]
    BadProblem,
    #[error("torus rank {rank} is smaller than the semisimple rank {semisimple}")]
    NegativeTorus { rank: usize, semisimple: usize },
    #[error("stabilizer not resolvable automatically: {0}")]
    Unresolvable(String),
    #[error("pinned support does not match the stratum it determines: {0}")]
    PinnedMismatch(String),
    #[error("no positive weight in the normal representation")]
    NoPositiveWeight,
    #[error("invalid step: {0}")]
    BadStep(String),
    #[error("ledger inconsistency: coefficient of t^{degree} would be {value}")]
    LedgerNegative { degree: usize, value: String },
}

fn base_series(
    n_weights: usize,
    blocks: &[Vec<usize>],
    rank: usize,
    n: usize,
) -> Result<TruncatedSeries, KirwanError> {
    let semisimple: usize = blocks.iter().map(|b| b.len().saturating_sub(1)).sum();
    if rank < semisimple {
        return Err(KirwanError::NegativeTorus { rank, semisimple });
    }
    let g = GroupDescriptor {
        torus_rank: (rank - semisimple) as u32,
        sl_blocks: blocks
            .iter()
            .filter(|b| b.len() > 1)
            .map(|b| b.len() as u32)
            .collect(),
        ..GroupDescriptor::default()
    };
    let p = projective_series(&ProjSpec::Dim(n_weights.saturating_sub(1) as u32), n);
    Ok(&p * &classifying_series(&g, n))
}

/// Equivariant series of the semistable locus of a [`LeviProblem`],
/// truncated at `n`, with root-counted codimensions throughout.
///
/// The constant term is `1` exactly when semistable points exist.
pub fn levi_series(problem: &LeviProblem, n: usize) -> Result<TruncatedSeries, KirwanError> {
    problem.validate()?;
    let mut res = base_series(problem.weights.len(), &problem.blocks, problem.rank, n)?;
    let single_block = problem.blocks.len() == 1;
    let opts = SearchOptions {
        symmetry: single_block,
        parallel: true,
    };
    for st in problem.strata(opts) {
        let c = st.codim();
        // A nonempty stratum has codimension at least 0, so a negative
        // root count means the stratum is empty.
        if c < 0 {
            continue;
        }
        let shift = 2 * c as usize;
        if shift > n {
            continue;
        }
        let sub = problem.critical_subproblem(&st)?;
        let inner = levi_series(&sub, n - shift)?.div_one_minus(2, 1);
        res = &res - &inner.with_order(n).shift(shift);
    }
    Ok(res)
}

/// `P^G(X^ss)` for `SL(n_vars)` on degree-`d` forms, truncated at `n`.
///
/// With [`CodimMode::Paper`] and pinned strata available for `(n_vars, d)`,
/// only the pinned strata are subtracted, each with its pinned codimension,
/// and critical sets that are full form spaces recurse in the same mode.
pub fn equivariant_ss_series(
    n_vars: usize,
    d: u32,
    n: usize,
    mode: CodimMode,
) -> Result<TruncatedSeries, KirwanError> {
    if n_vars < 2 || d < 1 {
        return Err(KirwanError::BadProblem);
    }
    let pinned = overrides_for(n_vars, d);
    if mode == CodimMode::RootCount || pinned.is_empty() {
        let table = enumerate_monomials(n_vars, d);
        return levi_series(&LeviProblem::special_linear(table.integer_weights()), n);
    }
    let table = enumerate_monomials(n_vars, d);
    let problem = LeviProblem::special_linear(table.integer_weights());
    let mut res = base_series(table.len(), &problem.blocks, problem.rank, n)?;
    for entry in pinned {
        let weights: Vec<WeightVector> = entry.support.iter().map(weight_of).collect();
        let beta = nearest_point_hull(&weights).point;
        let (num, den) = scaled_fraction(n_vars, &beta);
        let st = problem.stratum(&num, den);
        let z: Vec<ExponentVector> = st.z.iter().map(|&i| table.entries[i].0.clone()).collect();
        let mut sorted = z.clone();
        sorted.sort();
        let mut expected = entry.support.clone();
        expected.sort();
        if sorted != expected {
            return Err(KirwanError::PinnedMismatch(entry.note.clone()));
        }
        let shift = 2 * entry.codim as usize;
        if shift > n {
            continue;
        }
        let contribution = stratum_contribution(&table, &beta, n - shift, mode)?;
        res = &res - &contribution.with_order(n).shift(shift);
    }
    Ok(res)
}

/// `P^Stab(beta)(Z_beta^ss)` truncated at `n`: through [`stabilizer_split`]
/// when it applies, otherwise by the Levi recursion on the critical set.
pub fn stratum_contribution(
    table: &WeightTable,
    beta: &WeightVector,
    n: usize,
    mode: CodimMode,
) -> Result<TruncatedSeries, KirwanError> {
    let problem = LeviProblem::special_linear(table.integer_weights());
    let (num, den) = scaled_fraction(table.n_vars, beta);
    let st = problem.stratum(&num, den);
    let z: Vec<ExponentVector> = st.z.iter().map(|&i| table.entries[i].0.clone()).collect();
    match stabilizer_split(beta, &z) {
        Ok(split) => split.series(n, mode),
        Err(_) => Ok(levi_series(&problem.critical_subproblem(&st)?, n)?.div_one_minus(2, 1)),
    }
}

/// `P^G(X^ss)` for `SL(n_vars)` on a direct sum of form spaces of the given
/// degrees, truncated at `n`.
pub fn equivariant_ss_series_multi(
    n_vars: usize,
    degrees: &[u32],
    n: usize,
) -> Result<TruncatedSeries, KirwanError> {
    if n_vars < 2 || degrees.is_empty() || degrees.contains(&0) {
        return Err(KirwanError::BadProblem);
    }
    let weights: Vec<Vec<i64>> = degrees
        .iter()
        .flat_map(|&d| enumerate_monomials(n_vars, d).integer_weights())
        .collect();
    levi_series(&LeviProblem::special_linear(weights), n)
}

/// What remains of `Stab(beta)` acting on `Z_beta` after splitting off its
/// central torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Residual {
    /// `Z_beta` is a point.
    Point,
    /// `SL(n_vars)` acting on all degree-`degree` forms in a block of variables.
    Forms { n_vars: usize, degree: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerSplit {
    /// Rank of the central torus, including the subgroup generated by `beta`.
    pub central_torus_rank: usize,
    pub residual: Residual,
    /// `SL` blocks of the Levi factor that act trivially on `Z_beta`.
    pub trivial_sl_blocks: Vec<u32>,
}

impl StabilizerSplit {
    pub fn group_part(&self) -> GroupDescriptor {
        GroupDescriptor {
            torus_rank: self.central_torus_rank as u32,
            sl_blocks: self.trivial_sl_blocks.clone(),
            ..GroupDescriptor::default()
        }
    }

    /// `P^Stab(beta)(Z_beta^ss)` truncated at `n`.
    pub fn series(&self, n: usize, mode: CodimMode) -> Result<TruncatedSeries, KirwanError> {
        let g = classifying_series(&self.group_part(), n);
        let r = match self.residual {
            Residual::Point => TruncatedSeries::one(n),
            Residual::Forms { n_vars, degree } => equivariant_ss_series(n_vars, degree, n, mode)?,
        };
        Ok(&g * &r)
    }
}

/// Recognises `Stab(beta)` acting on `Z_beta` as a central torus times `SL`
/// on a full space of forms in one level set of `beta`.
pub fn stabilizer_split(
    beta: &WeightVector,
    z: &[ExponentVector],
) -> Result<StabilizerSplit, KirwanError> {
    let Some(first) = z.first() else {
        return Err(KirwanError::Unresolvable("empty critical support".into()));
    };
    let n = first.0.len();
    if beta.dim() != n {
        return Err(KirwanError::Unresolvable("dimension mismatch".into()));
    }
    let levels = level_sets(beta);
    let varying: Vec<usize> = (0..n)
        .filter(|&i| z.iter().any(|e| e.0[i] != first.0[i]))
        .collect();
    let block_of = |i: usize| levels.iter().position(|b| b.contains(&i)).unwrap();
    let mut residual = Residual::Point;
    let mut forms_block = None;
    if !varying.is_empty() {
        let b = block_of(varying[0]);
        if levels[b] != varying {
            return Err(KirwanError::Unresolvable(format!(
                "varying variables {varying:?} are not a level set of beta"
            )));
        }
        let degree: u32 = varying.iter().map(|&i| first.0[i]).sum();
        let expected = num_integer::binomial(varying.len() + degree as usize - 1, degree as usize);
        let mut distinct = z.to_vec();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != z.len() || z.len() != expected {
            return Err(KirwanError::Unresolvable(
                "critical support is not a full space of forms".into(),
            ));
        }
        if varying.len() > 1 {
            residual = Residual::Forms {
                n_vars: varying.len(),
                degree,
            };
        }
        forms_block = Some(b);
    }
    let mut trivial = Vec::new();
    for (k, b) in levels.iter().enumerate() {
        if Some(k) == forms_block || b.len() < 2 {
            continue;
        }
        if b.iter().any(|&i| first.0[i] != 0) {
            return Err(KirwanError::Unresolvable(format!(
                "block {b:?} carries fixed nonzero exponents"
            )));
        }
        trivial.push(b.len() as u32);
    }
    Ok(StabilizerSplit {
        central_torus_rank: levels.len() - 1,
        residual,
        trivial_sl_blocks: trivial,
    })
}

/// One Kirwan blowup in the desingularisation ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupStep {
    pub name: String,
    pub d_r: u32,
    pub center_series: TruncatedSeries,
    /// `(codim, series)`: each contributes `t^(2 codim) * series`.
    pub removal_terms: Vec<(u32, TruncatedSeries)>,
}

/// `(t^2 + ... + t^(2 d_R)) * center - sum t^(2 codim) * removal`, truncated at `n`.
pub fn blowup_correction(step: &BlowupStep, n: usize) -> Result<TruncatedSeries, KirwanError> {
    if step.d_r < 1 {
        return Err(KirwanError::BadStep(format!(
            "{}: d_R must be at least 1",
            step.name
        )));
    }
    let mut out = &finite_geometric(2, 2 * step.d_r, n)? * &step.center_series.with_order(n);
    for (codim, s) in &step.removal_terms {
        if *codim < 1 {
            return Err(KirwanError::BadStep(format!(
                "{}: removal codimension must be positive",
                step.name
            )));
        }
        out = &out - &s.with_order(n).shift(2 * *codim as usize);
    }
    Ok(out)
}

/// One term of a rank-one normal-representation removal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank1Term {
    pub weight: i64,
    pub multiplicity: u32,
    pub codim: u32,
}

/// Codimension of every positive weight: the number of weights (with
/// multiplicity) strictly below it.
pub fn rank1_terms(weights: &[(i64, u32)]) -> Vec<Rank1Term> {
    let mut distinct: Vec<i64> = weights.iter().map(|w| w.0).filter(|&w| w > 0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    distinct
        .into_iter()
        .map(|w| Rank1Term {
            weight: w,
            multiplicity: weights.iter().filter(|x| x.0 == w).map(|x| x.1).sum(),
            codim: weights.iter().filter(|x| x.0 < w).map(|x| x.1).sum(),
        })
        .collect()
}

/// `base * sum_w t^(2 codim(w)) / (1 - t^2) * P(P^(mult(w) - 1))` over the
/// positive weights `w` of a `C*`-representation.
pub fn rank1_normal_removal(
    weights: &[(i64, u32)],
    base_factor: &TruncatedSeries,
    n: usize,
) -> Result<TruncatedSeries, KirwanError> {
    let terms = rank1_terms(weights);
    if terms.is_empty() {
        return Err(KirwanError::NoPositiveWeight);
    }
    let mut sum = TruncatedSeries::zero(n);
    for t in terms {
        let p = projective_series(&ProjSpec::Dim(t.multiplicity - 1), n).div_one_minus(2, 1);
        sum = &sum + &p.shift(2 * t.codim as usize);
    }
    Ok(&base_factor.with_order(n) * &sum)
}

/// One blow-down in the intersection-cohomology ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowdownStep {
    pub name: String,
    pub base_series: TruncatedSeries,
    /// Poincaré polynomial of the fibre quotient (palindromic).
    pub fiber_series: TruncatedSeries,
    pub fiber_quotient_complex_dim: usize,
}

/// Completes the lower half (degrees `0..=dim`) of a fibre series by duality.
pub fn complete_fiber(lower: &TruncatedSeries, dim: usize) -> Result<TruncatedSeries, KirwanError> {
    Ok(duality_complete(&lower.with_order(dim), dim)?)
}

/// Removal term `B(t) = base(t) * F(t)` with `F_q = g_(q-2)` for
/// `q <= dim` and `F_q = g_q` above, where `g` is the fibre series.
pub fn ic_blowdown(step: &BlowdownStep, n: usize) -> Result<TruncatedSeries, KirwanError> {
    let g = &step.fiber_series;
    let dim = step.fiber_quotient_complex_dim;
    let mut f = TruncatedSeries::zero(n);
    for q in 0..=n {
        let c = if q <= dim {
            if q < 2 {
                continue;
            }
            g.coeff(q - 2)
        } else {
            g.coeff(q)
        };
        f.set_coeff(q, c);
    }
    Ok(&step.base_series.with_order(n) * &f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompKind {
    Pbundle,
    Semismall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// From the contracted space to the resolution: add the fibre terms.
    Forward,
    /// From the resolution to the contracted space: remove them.
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompStep {
    pub kind: DecompKind,
    pub z_series: TruncatedSeries,
    pub codim_c: i64,
    pub fiber_dim_m: u32,
    pub ambient_dim_n: i64,
}

fn shift_signed(s: &TruncatedSeries, k: i64) -> TruncatedSeries {
    if k >= 0 {
        return s.shift(k as usize);
    }
    let n = s.order();
    let down = (-k) as usize;
    let mut out = TruncatedSeries::zero(n);
    for i in down..=n {
        out.set_coeff(i - down, s.coeff(i));
    }
    out
}

fn check_nonnegative(s: &TruncatedSeries) -> Result<(), KirwanError> {
    for k in 0..=s.order() {
        let c = s.coeff(k);
        if c < rat(0) {
            return Err(KirwanError::LedgerNegative {
                degree: k,
                value: c.to_string(),
            });
        }
    }
    Ok(())
}

/// Fibre contribution of a projective-bundle contraction:
/// `sum_{j = 2, 4, ..., 2m} t^(c - j) * z`.
pub fn pbundle_contribution(step: &DecompStep, n: usize) -> TruncatedSeries {
    let z = step.z_series.with_order(n);
    let mut out = TruncatedSeries::zero(n);
    for j in (2..=2 * step.fiber_dim_m as i64).step_by(2) {
        out = &out + &shift_signed(&z, step.codim_c - j);
    }
    out
}

/// Transfers a Betti series across a projective-bundle contraction.
pub fn decomp_pbundle(
    direction: Direction,
    known: &TruncatedSeries,
    step: &DecompStep,
    n: usize,
) -> Result<TruncatedSeries, KirwanError> {
    if step.kind != DecompKind::Pbundle {
        return Err(KirwanError::BadStep("expected a pbundle step".into()));
    }
    let c = pbundle_contribution(step, n);
    let out = match direction {
        Direction::Forward => &known.with_order(n) + &c,
        Direction::Inverse => &known.with_order(n) - &c,
    };
    check_nonnegative(&out)?;
    Ok(out)
}

/// Contribution of a semismall contraction with `m`-dimensional fibres over
/// `Z`: `sum_{j = 0..=m} t^(n_amb - 2j) * z`; nothing when `m = 0`.
pub fn semismall_contribution(step: &DecompStep, n: usize) -> TruncatedSeries {
    let z = step.z_series.with_order(n);
    let mut out = TruncatedSeries::zero(n);
    if step.fiber_dim_m == 0 {
        return out;
    }
    for j in 0..=step.fiber_dim_m as i64 {
        out = &out + &shift_signed(&z, step.ambient_dim_n - 2 * j);
    }
    out
}

/// Removes the semismall contraction terms from `known`.
pub fn decomp_semismall(
    known: &TruncatedSeries,
    step: &DecompStep,
    n: usize,
) -> Result<TruncatedSeries, KirwanError> {
    if step.kind != DecompKind::Semismall {
        return Err(KirwanError::BadStep("expected a semismall step".into()));
    }
    let out = &known.with_order(n) - &semismall_contribution(step, n);
    check_nonnegative(&out)?;
    Ok(out)
}

/// True when every coefficient up to the order is zero; handy for removal
/// terms that vanish at the working order.
pub fn vanishes(s: &TruncatedSeries) -> bool {
    s.coeffs().iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::expand_rational;

    #[test]
    fn binary_forms_small_degrees() {
        // linear forms: nothing is semistable
        let s = equivariant_ss_series(2, 1, 6, CodimMode::RootCount).unwrap();
        assert!(s.is_zero());
        // quadrics: one orbit, stabiliser the normaliser of a torus
        let s = equivariant_ss_series(2, 2, 8, CodimMode::RootCount).unwrap();
        assert_eq!(s, expand_rational(&[1], &[(4, 1)], 8).unwrap());
    }

    #[test]
    fn plane_cubics_closed_form() {
        let s = equivariant_ss_series(3, 3, 30, CodimMode::RootCount).unwrap();
        let x = expand_rational(&[1], &[(4, 1), (6, 1)], 30).unwrap();
        // t^2 + 1/((1-t^4)(1-t^6))
        let expected = &x + &TruncatedSeries::monomial(2, rat(1), 30);
        assert_eq!(s, expected);
    }

    #[test]
    fn split_of_omit_x0() {
        let table = enumerate_monomials(6, 3);
        let z: Vec<ExponentVector> = table.monomials().filter(|e| e.0[0] == 0).cloned().collect();
        let beta = nearest_point_hull(&z.iter().map(weight_of).collect::<Vec<_>>()).point;
        let split = stabilizer_split(&beta, &z).unwrap();
        assert_eq!(split.central_torus_rank, 1);
        assert_eq!(
            split.residual,
            Residual::Forms {
                n_vars: 5,
                degree: 3
            }
        );
    }

    #[test]
    fn contribution_falls_back_to_the_levi_recursion() {
        let table = enumerate_monomials(4, 3);
        let z: Vec<WeightVector> = ["x0^2*x3", "x0*x1^2", "x0*x1*x2", "x0*x2^2"]
            .iter()
            .map(|m| weight_of(table.monomials().find(|e| e.to_string() == *m).unwrap()))
            .collect();
        let beta = nearest_point_hull(&z).point;
        let s = stratum_contribution(&table, &beta, 12, CodimMode::RootCount).unwrap();
        // central torus times SL(2) on binary quadrics
        assert_eq!(s, expand_rational(&[1], &[(2, 1), (4, 1)], 12).unwrap());
    }

    #[test]
    fn threefold_recursion_runs_past_empty_strata() {
        let s = equivariant_ss_series(5, 3, 6, CodimMode::RootCount).unwrap();
        assert_eq!(s.coeff(0), rat(1));
    }

    #[test]
    fn point_split() {
        let z = vec![ExponentVector(vec![3, 0, 0])];
        let beta = weight_of(&z[0]);
        let split = stabilizer_split(&beta, &z).unwrap();
        assert_eq!(split.residual, Residual::Point);
        assert_eq!(split.central_torus_rank, 1);
        assert_eq!(split.trivial_sl_blocks, vec![2]);
    }

    #[test]
    fn blowup_with_no_removals() {
        let step = BlowupStep {
            name: "x".into(),
            d_r: 1,
            center_series: TruncatedSeries::one(6),
            removal_terms: vec![],
        };
        assert_eq!(
            blowup_correction(&step, 6).unwrap(),
            TruncatedSeries::monomial(2, rat(1), 6)
        );
    }

    #[test]
    fn rank1_single_positive_weight() {
        let w = [(2, 3), (-1, 4), (-3, 2)];
        let terms = rank1_terms(&w);
        assert_eq!(
            terms,
            vec![Rank1Term {
                weight: 2,
                multiplicity: 3,
                codim: 6
            }]
        );
        assert_eq!(
            rank1_normal_removal(&[(-1, 2)], &TruncatedSeries::one(4), 4),
            Err(KirwanError::NoPositiveWeight)
        );
    }

    #[test]
    fn blowdown_of_trivial_fiber_vanishes() {
        let step = BlowdownStep {
            name: "pt".into(),
            base_series: TruncatedSeries::one(10),
            fiber_series: TruncatedSeries::one(0),
            fiber_quotient_complex_dim: 0,
        };
        assert!(ic_blowdown(&step, 10).unwrap().is_zero());
    }

    #[test]
    fn pbundle_round_trip_and_point_case() {
        let step = DecompStep {
            kind: DecompKind::Pbundle,
            z_series: TruncatedSeries::one(8),
            codim_c: 4,
            fiber_dim_m: 1,
            ambient_dim_n: 0,
        };
        let known = TruncatedSeries::from_ints(&[1, 0, 3, 0, 3, 0, 1], 8);
        let down = decomp_pbundle(Direction::Inverse, &known, &step, 8).unwrap();
        assert_eq!(down, TruncatedSeries::from_ints(&[1, 0, 2, 0, 3, 0, 1], 8));
        assert_eq!(
            decomp_pbundle(Direction::Forward, &down, &step, 8).unwrap(),
            known
        );
    }

    #[test]
    fn semismall_m_zero_is_identity() {
        let step = DecompStep {
            kind: DecompKind::Semismall,
            z_series: TruncatedSeries::one(20),
            codim_c: 0,
            fiber_dim_m: 0,
            ambient_dim_n: 20,
        };
        let known = TruncatedSeries::one(20);
        assert_eq!(decomp_semismall(&known, &step, 20).unwrap(), known);
    }
}
