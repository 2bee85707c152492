//! Monomials of degree `d` in `n` variables and their weights for the
//! diagonal torus of `SL(n)`.
//!
//! The weight of `x^I` is the orthogonal projection `I - (d/n)(1,...,1)` onto
//! the traceless hyperplane, paired with the standard inner product. That
//! choice is invariant under the Weyl group `S_n`, so supports and
//! codimensions do not depend on coordinates.

use std::fmt;

use num_integer::binomial;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{frac, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightsError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("the zero vector has no parabolic or stratum")]
    ZeroBeta,
}

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Applies a variable permutation: variable `i` becomes variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[perm[i]] = e;
        }
        ExponentVector(out)
    }
}

/// Writes the monomial as `x0*x1^2`; the constant monomial prints as `1`.
impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Vector in the Lie algebra of the maximal torus, in traceless coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector {
    pub coords: Vec<Rational>,
}

impl WeightVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn norm_sq(&self) -> Rational {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        Self::new(self.coords.iter().map(|a| a * c).collect())
    }

    /// The same vector with its coordinates permuted: entry `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, c) in self.coords.iter().enumerate() {
            out[perm[i]] = c.clone();
        }
        Self::new(out)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// All monomials of one degree with their weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTable {
    pub n_vars: usize,
    pub degree: u32,
    pub entries: Vec<(ExponentVector, WeightVector)>,
}

impl WeightTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = &WeightVector> {
        self.entries.iter().map(|(_, w)| w)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &ExponentVector> {
        self.entries.iter().map(|(e, _)| e)
    }

    /// Index of a monomial in the table.
    pub fn position(&self, e: &ExponentVector) -> Option<usize> {
        self.entries.iter().position(|(x, _)| x == e)
    }

    /// Names of the monomials at the given indices.
    pub fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.entries[i].0.to_string()).collect()
    }

    /// Weights scaled by `n_vars` so that every coordinate is an integer.
    pub fn integer_weights(&self) -> Vec<Vec<i64>> {
        let n = self.n_vars as i64;
        let d = self.degree as i64;
        self.entries
            .iter()
            .map(|(e, _)| e.0.iter().map(|&i| n * i as i64 - d).collect())
            .collect()
    }
}

/// Exponent vectors of degree `d` in `n_vars` variables, ordered
/// lexicographically with the first exponent decreasing.
pub fn exponent_vectors(n_vars: usize, d: u32) -> Vec<ExponentVector> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if n == 1 {
            prefix.push(d);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for i in (0..=d).rev() {
            prefix.push(i);
            rec(n - 1, d - i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n_vars > 0 {
        rec(n_vars, d, &mut Vec::new(), &mut out);
    }
    out
}

/// The weight `I - (d/n)(1,...,1)` of one exponent vector.
pub fn weight_of(e: &ExponentVector) -> WeightVector {
    let n = e.0.len() as i64;
    let d = e.degree() as i64;
    WeightVector::new(e.0.iter().map(|&i| rat(i as i64) - frac(d, n)).collect())
}

/// Builds the table of all degree-`d` monomials in `n_vars` variables.
pub fn enumerate_monomials(n_vars: usize, d: u32) -> WeightTable {
    let entries = exponent_vectors(n_vars, d)
        .into_iter()
        .map(|e| {
            let w = weight_of(&e);
            (e, w)
        })
        .collect();
    WeightTable {
        n_vars,
        degree: d,
        entries,
    }
}

pub fn inner(u: &WeightVector, v: &WeightVector) -> Result<Rational, WeightsError> {
    if u.dim() != v.dim() {
        return Err(WeightsError::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(u.coords.iter().zip(&v.coords).map(|(a, b)| a * b).sum())
}

/// Sorts coordinates into weakly decreasing order.
///
/// Returns the dominant vector and `perm`, where `perm[k]` is the original
/// index of the coordinate that ends up in slot `k`. The sort is stable, so a
/// dominant input comes back with the identity.
pub fn chamber_sort(v: &WeightVector) -> (WeightVector, Vec<usize>) {
    let mut perm: Vec<usize> = (0..v.dim()).collect();
    perm.sort_by(|&a, &b| v.coords[b].cmp(&v.coords[a]));
    let sorted = perm.iter().map(|&i| v.coords[i].clone()).collect();
    (WeightVector::new(sorted), perm)
}

/// `dim SL(n)`.
pub fn dim_g(n_vars: usize) -> usize {
    n_vars * n_vars - 1
}

/// Dimension of the projective space of degree-`d` forms in `n_vars` variables.
pub fn dim_x(n_vars: usize, d: u32) -> usize {
    binomial(n_vars + d as usize - 1, d as usize) - 1
}

/// Dimension of the parabolic subgroup of `beta`: the rank plus the number of
/// ordered pairs `(i, j)`, `i != j`, with `beta_i >= beta_j`.
pub fn parabolic_dim(beta: &WeightVector) -> Result<usize, WeightsError> {
    if beta.is_zero() {
        return Err(WeightsError::ZeroBeta);
    }
    let m = beta.dim();
    let mut count = m - 1;
    for i in 0..m {
        for j in 0..m {
            if i != j && beta.coords[i] >= beta.coords[j] {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Supports of `beta`: monomials on the critical hyperplane, those on or
/// above it, and the count strictly below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Supports {
    pub z_support: Vec<usize>,
    pub y_support: Vec<usize>,
    pub n_beta: usize,
}

pub fn pairing_supports(
    table: &WeightTable,
    beta: &WeightVector,
) -> Result<Supports, WeightsError> {
    if beta.is_zero() {
        return Err(WeightsError::ZeroBeta);
    }
    let nb = beta.norm_sq();
    let mut z = Vec::new();
    let mut y = Vec::new();
    let mut n_beta = 0;
    for (i, w) in table.weights().enumerate() {
        let p = inner(w, beta)?;
        match p.cmp(&nb) {
            std::cmp::Ordering::Less => n_beta += 1,
            std::cmp::Ordering::Equal => {
                z.push(i);
                y.push(i);
            }
            std::cmp::Ordering::Greater => y.push(i),
        }
    }
    Ok(Supports {
        z_support: z,
        y_support: y,
        n_beta,
    })
}

/// Groups coordinate indices of `beta` by value, largest value first.
pub fn level_sets(beta: &WeightVector) -> Vec<Vec<usize>> {
    let mut vals: Vec<&Rational> = beta.coords.iter().collect();
    vals.sort();
    vals.dedup();
    vals.reverse();
    vals.into_iter()
        .map(|v| (0..beta.dim()).filter(|&i| &beta.coords[i] == v).collect())
        .collect()
}

/// Smallest positive integer multiple of `beta` with integral coordinates,
/// useful for printing one-parameter subgroups.
pub fn primitive_integral(beta: &WeightVector) -> Vec<i64> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let mut l = num_bigint::BigInt::from(1);
    for c in &beta.coords {
        l = l.lcm(c.denom());
    }
    let ints: Vec<num_bigint::BigInt> = beta
        .coords
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return vec![0; beta.dim()];
    }
    ints.iter()
        .map(|x| (x / &g).to_i64().expect("coordinate fits in i64"))
        .collect()
}

/// True if all coordinates are weakly decreasing.
pub fn is_dominant(v: &WeightVector) -> bool {
    v.coords.windows(2).all(|w| w[0] >= w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(enumerate_monomials(6, 3).len(), 56);
        assert_eq!(enumerate_monomials(5, 3).len(), 35);
        assert_eq!(dim_x(6, 3), 55);
        assert_eq!(dim_g(6), 35);
    }

    #[test]
    fn linear_binary_weights() {
        let t = enumerate_monomials(2, 1);
        let ws: Vec<_> = t.weights().cloned().collect();
        assert_eq!(ws[0].coords, vec![frac(1, 2), frac(-1, 2)]);
        assert_eq!(ws[1].coords, vec![frac(-1, 2), frac(1, 2)]);
        assert_eq!(inner(&ws[0], &ws[0]).unwrap(), frac(1, 2));
    }

    #[test]
    fn names_use_zero_based_variables() {
        assert_eq!(ExponentVector(vec![0, 1, 2]).to_string(), "x1*x2^2");
        assert_eq!(
            ExponentVector(vec![0, 1, 0, 1, 1, 0]).to_string(),
            "x1*x3*x4"
        );
    }

    #[test]
    fn sorting_into_the_chamber() {
        let (s, p) = chamber_sort(&WeightVector::from_ints(&[0, 1, -1]));
        assert_eq!(s, WeightVector::from_ints(&[1, 0, -1]));
        assert_eq!(p, vec![1, 0, 2]);
        let dom = WeightVector::from_ints(&[2, 0, -2]);
        assert_eq!(chamber_sort(&dom), (dom.clone(), vec![0, 1, 2]));
    }

    #[test]
    fn parabolic_counts() {
        assert_eq!(
            parabolic_dim(&WeightVector::from_ints(&[3, 1, -1, -3])).unwrap(),
            3 + 6
        );
        let beta = WeightVector::new(vec![
            frac(-1, 2),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
        ]);
        assert_eq!(parabolic_dim(&beta).unwrap(), 30);
        // blocks of sizes 2 and 3
        let b = WeightVector::from_ints(&[3, 3, -2, -2, -2]);
        assert_eq!(parabolic_dim(&b).unwrap(), 4 + 2 + 6 + 6);
        assert_eq!(
            parabolic_dim(&WeightVector::zero(3)),
            Err(WeightsError::ZeroBeta)
        );
    }

    #[test]
    fn omit_x0_face_supports() {
        let t = enumerate_monomials(6, 3);
        let beta = WeightVector::new(vec![
            frac(-1, 2),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
            frac(1, 10),
        ]);
        let s = pairing_supports(&t, &beta).unwrap();
        assert_eq!(s.z_support.len(), 35);
        assert_eq!(s.y_support, s.z_support);
        assert_eq!(s.n_beta, 21);
        assert!(s.z_support.iter().all(|&i| t.entries[i].0 .0[0] == 0));
    }

    #[test]
    fn integral_direction() {
        let b = WeightVector::new(vec![frac(1, 2), frac(-1, 6), frac(-1, 3)]);
        assert_eq!(primitive_integral(&b), vec![3, -1, -2]);
    }
}
