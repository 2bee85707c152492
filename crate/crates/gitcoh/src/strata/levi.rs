//! Kirwan strata for a torus-by-blocks group acting linearly with integer
//! weights.
//!
//! A problem is a multiset of weights in `Z^n`, a partition of the
//! coordinates into blocks (the Levi factor is `S(prod GL(block))`), and the
//! rank of the torus that acts effectively. The full `SL(n)` problem on
//! degree-`d` forms is the case of a single block; every stratum's critical
//! set is again a problem of this shape with one rank less, which is what
//! makes the Kirwan recursion close up.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use super::affine::{affine_nearest_exact, reduce};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeviError {
    #[error("weights of a sub-problem do not fit in 64-bit integers")]
    Overflow,
    #[error("blocks do not partition the {0} coordinates")]
    BadBlocks(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviProblem {
    /// Weights with multiplicity, all of length `dim`.
    pub weights: Vec<Vec<i64>>,
    /// Partition of `0..dim` into Levi blocks.
    pub blocks: Vec<Vec<usize>>,
    /// Dimension of the effectively acting torus.
    pub rank: usize,
}

/// A stratum of a [`LeviProblem`]: `beta = num / den`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeviStratum {
    pub num: Vec<i128>,
    pub den: i128,
    /// Indices of weights on the critical hyperplane.
    pub z: Vec<usize>,
    /// Number of weights strictly below the critical hyperplane.
    pub n_below: usize,
    /// Number of ordered in-block pairs with `beta_i < beta_j`.
    pub negative_roots: usize,
}

impl LeviStratum {
    /// Complex codimension of the stratum.
    pub fn codim(&self) -> i64 {
        self.n_below as i64 - self.negative_roots as i64
    }
}

/// Options for [`LeviProblem::strata`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Only use `S_n`-orbit representatives as the first subset element.
    /// Valid only for a single block covering every coordinate.
    pub symmetry: bool,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            symmetry: false,
            parallel: true,
        }
    }
}

fn pair_cmp(w: &[i64], num: &[i128], den: i128, nn: i128) -> Ordering {
    let mut acc: Option<i128> = Some(0);
    for (a, b) in w.iter().zip(num) {
        acc = acc.and_then(|s| s.checked_add((*a as i128).checked_mul(*b)?));
    }
    if let Some(p) = acc.and_then(|s| s.checked_mul(den)) {
        return p.cmp(&nn);
    }
    let p: BigInt = w
        .iter()
        .zip(num)
        .map(|(a, b)| BigInt::from(*a) * BigInt::from(*b))
        .sum();
    (p * BigInt::from(den)).cmp(&BigInt::from(nn))
}

impl LeviProblem {
    /// `SL(n)`-problem with the given weights: one block, rank `n - 1`.
    pub fn special_linear(weights: Vec<Vec<i64>>) -> Self {
        let n = weights.first().map_or(0, Vec::len);
        Self {
            weights,
            blocks: vec![(0..n).collect()],
            rank: n.saturating_sub(1),
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<(), LeviError> {
        let n = self.dim();
        let mut seen = vec![false; n];
        for b in &self.blocks {
            for &i in b {
                if i >= n || seen[i] {
                    return Err(LeviError::BadBlocks(n));
                }
                seen[i] = true;
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(LeviError::BadBlocks(n))
        }
    }

    /// Sorts the coordinates of `v` decreasingly inside every block.
    pub fn dominant(&self, v: &[i128]) -> Vec<i128> {
        let mut out = v.to_vec();
        for b in &self.blocks {
            let mut vals: Vec<i128> = b.iter().map(|&i| v[i]).collect();
            vals.sort_unstable_by(|a, b| b.cmp(a));
            for (&i, x) in b.iter().zip(vals) {
                out[i] = x;
            }
        }
        out
    }

    fn distinct(&self) -> Vec<&[i64]> {
        let set: BTreeSet<&[i64]> = self.weights.iter().map(Vec::as_slice).collect();
        set.into_iter().collect()
    }

    /// All dominant nonzero nearest points of convex hulls of weight subsets,
    /// as reduced fractions.
    pub fn index_vectors(&self, opts: SearchOptions) -> BTreeSet<(Vec<i128>, i128)> {
        let pts = self.distinct();
        let m = pts.len();
        let max_k = (self.rank + 1).min(m);
        let firsts: Vec<usize> = if opts.symmetry {
            (0..m)
                .filter(|&i| pts[i].windows(2).all(|w| w[0] >= w[1]))
                .collect()
        } else {
            (0..m).collect()
        };
        // tasks: (subset size, first element, second element or none)
        let mut tasks: Vec<(usize, usize, Option<usize>)> = Vec::new();
        for k in 1..=max_k {
            for &f in &firsts {
                if k == 1 {
                    tasks.push((k, f, None));
                    continue;
                }
                for s in 0..m {
                    let ok = if opts.symmetry { s != f } else { s > f };
                    if ok {
                        tasks.push((k, f, Some(s)));
                    }
                }
            }
        }
        let run = |&(k, f, s): &(usize, usize, Option<usize>)| -> BTreeSet<(Vec<i128>, i128)> {
            let mut found = BTreeSet::new();
            let mut visit = |idx: &[usize]| {
                let sub: Vec<&[i64]> = idx.iter().map(|&i| pts[i]).collect();
                if let Some(sol) = affine_nearest_exact(&sub) {
                    if sol.all_positive() && !sol.is_origin() {
                        let dom = self.dominant(&sol.num);
                        found.insert(reduce(&dom, sol.den));
                    }
                }
            };
            match s {
                None => visit(&[f]),
                Some(s) => {
                    let pool: Vec<usize> = (s + 1..m).filter(|&i| i != f).collect();
                    for rest in pool.iter().copied().combinations(k - 2) {
                        let mut idx = Vec::with_capacity(k);
                        idx.push(f);
                        idx.push(s);
                        idx.extend(rest);
                        visit(&idx);
                    }
                }
            }
            found
        };
        if opts.parallel {
            tasks.par_iter().map(run).reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            })
        } else {
            tasks.iter().map(run).fold(BTreeSet::new(), |mut a, b| {
                a.extend(b);
                a
            })
        }
    }

    /// Critical support and codimension data of `beta = num / den`.
    pub fn stratum(&self, num: &[i128], den: i128) -> LeviStratum {
        let nn: i128 = num.iter().map(|x| x * x).sum();
        let mut z = Vec::new();
        let mut n_below = 0;
        for (i, w) in self.weights.iter().enumerate() {
            match pair_cmp(w, num, den, nn) {
                Ordering::Less => n_below += 1,
                Ordering::Equal => z.push(i),
                Ordering::Greater => {}
            }
        }
        let mut negative_roots = 0;
        for b in &self.blocks {
            for &i in b {
                for &j in b {
                    if num[i] < num[j] {
                        negative_roots += 1;
                    }
                }
            }
        }
        LeviStratum {
            num: num.to_vec(),
            den,
            z,
            n_below,
            negative_roots,
        }
    }

    /// Every stratum, sorted by codimension and then by `beta`.
    pub fn strata(&self, opts: SearchOptions) -> Vec<LeviStratum> {
        let mut out: Vec<LeviStratum> = self
            .index_vectors(opts)
            .into_iter()
            .map(|(num, den)| self.stratum(&num, den))
            .collect();
        out.sort_by(|a, b| a.codim().cmp(&b.codim()).then_with(|| a.cmp(b)));
        out
    }

    /// The problem on the critical set of a stratum: weights `w - beta`
    /// (rescaled to primitive integers), blocks refined by the level sets of
    /// `beta`, rank one less.
    pub fn critical_subproblem(&self, st: &LeviStratum) -> Result<LeviProblem, LeviError> {
        let mut subs: Vec<Vec<i128>> =
            st.z.iter()
                .map(|&i| {
                    self.weights[i]
                        .iter()
                        .zip(&st.num)
                        .map(|(&w, &b)| (w as i128) * st.den - b)
                        .collect()
                })
                .collect();
        let mut g: i128 = 0;
        for v in &subs {
            for &x in v {
                g = g.gcd(&x);
            }
        }
        if g > 1 {
            for v in subs.iter_mut() {
                for x in v.iter_mut() {
                    *x /= g;
                }
            }
        }
        let weights = subs
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|x| i64::try_from(x).map_err(|_| LeviError::Overflow))
                    .collect()
            })
            .collect::<Result<Vec<Vec<i64>>, _>>()?;
        let mut blocks = Vec::new();
        for b in &self.blocks {
            let mut levels: Vec<i128> = b.iter().map(|&i| st.num[i]).collect();
            levels.sort_unstable_by(|a, b| b.cmp(a));
            levels.dedup();
            for l in levels {
                blocks.push(b.iter().copied().filter(|&i| st.num[i] == l).collect());
            }
        }
        Ok(LeviProblem {
            weights,
            blocks,
            rank: self.rank.saturating_sub(1),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::enumerate_monomials;

    fn forms(n: usize, d: u32) -> LeviProblem {
        LeviProblem::special_linear(enumerate_monomials(n, d).integer_weights())
    }

    #[test]
    fn binary_cubics_have_two_strata() {
        let p = forms(2, 3);
        let s = p.strata(SearchOptions::default());
        // the points x0^2*x1 and x0^3
        let codims: Vec<i64> = s.iter().map(LeviStratum::codim).collect();
        assert_eq!(codims, vec![1, 2]);
    }

    #[test]
    fn symmetry_toggle_agrees() {
        let p = forms(4, 3);
        let a = p.index_vectors(SearchOptions {
            symmetry: false,
            parallel: false,
        });
        let b = p.index_vectors(SearchOptions {
            symmetry: true,
            parallel: true,
        });
        assert_eq!(a, b);
    }

    #[test]
    fn subproblem_drops_rank() {
        let p = forms(3, 3);
        let s = &p.strata(SearchOptions::default())[0];
        let sub = p.critical_subproblem(s).unwrap();
        assert_eq!(sub.rank, 1);
        assert_eq!(sub.weights.len(), s.z.len());
        sub.validate().unwrap();
    }
}
