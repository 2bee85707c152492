//! Nearest point of the affine span of a few integer points, in fixed-width
//! integers where possible.
//!
//! This is the inner loop of the index-vector search, which visits tens of
//! millions of subsets for sextic variables, so it avoids heap-allocated
//! rationals. Overflow is detected with checked arithmetic and the caller
//! falls back to the rational solver in [`super::hull`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::hull::affine_nearest;
use crate::series::Rational;
use crate::weights::WeightVector;

/// Affine nearest point `num / den` with affine coefficients `lambda / den`.
/// `den > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub num: Vec<i128>,
    pub lambda: Vec<i128>,
    pub den: i128,
}

impl AffineSolution {
    pub fn all_positive(&self) -> bool {
        self.lambda.iter().all(|&l| l > 0)
    }

    pub fn is_origin(&self) -> bool {
        self.num.iter().all(|&x| x == 0)
    }

    /// The point as exact rationals.
    pub fn point(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|&x| Rational::new(BigInt::from(x), BigInt::from(self.den)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Dependent,
    Overflow,
}

fn dot(a: &[i64], b: &[i64]) -> Option<i128> {
    let mut s: i128 = 0;
    for (x, y) in a.iter().zip(b) {
        s = s.checked_add((*x as i128).checked_mul(*y as i128)?)?;
    }
    Some(s)
}

/// Fraction-free solve of the Gram system for `pts` (all of equal length).
pub fn affine_nearest_int(pts: &[&[i64]]) -> Result<AffineSolution, Outcome> {
    let k = pts.len();
    let dim = pts[0].len();
    if k == 1 {
        return Ok(AffineSolution {
            num: pts[0].iter().map(|&x| x as i128).collect(),
            lambda: vec![1],
            den: 1,
        });
    }
    let m = k - 1;
    if m > 8 || dim > 8 {
        return Err(Outcome::Overflow);
    }
    let p0 = pts[0];
    let mut diffs = [[0i64; 8]; 8];
    for j in 0..m {
        for t in 0..dim {
            diffs[j][t] = pts[j + 1][t].checked_sub(p0[t]).ok_or(Outcome::Overflow)?;
        }
    }
    // augmented Gram matrix [G | r]
    let mut a = [[0i128; 9]; 8];
    for i in 0..m {
        for j in i..m {
            let g = dot(&diffs[i][..dim], &diffs[j][..dim]).ok_or(Outcome::Overflow)?;
            a[i][j] = g;
            a[j][i] = g;
        }
        a[i][m] = -dot(&diffs[i][..dim], p0).ok_or(Outcome::Overflow)?;
    }
    // Bareiss elimination; the Gram matrix is positive semidefinite, so a
    // zero pivot means the points are affinely dependent.
    let mut prev: i128 = 1;
    for c in 0..m {
        if a[c][c] == 0 {
            return Err(Outcome::Dependent);
        }
        for r in c + 1..m {
            for col in c + 1..=m {
                let v = a[r][col]
                    .checked_mul(a[c][c])
                    .and_then(|x| x.checked_sub(a[r][c].checked_mul(a[c][col])?))
                    .ok_or(Outcome::Overflow)?;
                a[r][col] = v / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    let det = a[m - 1][m - 1];
    // back substitution on det * mu, which is integral by Cramer's rule
    let mut mu = [0i128; 8];
    for i in (0..m).rev() {
        let mut s = det.checked_mul(a[i][m]).ok_or(Outcome::Overflow)?;
        for j in i + 1..m {
            s = s
                .checked_sub(a[i][j].checked_mul(mu[j]).ok_or(Outcome::Overflow)?)
                .ok_or(Outcome::Overflow)?;
        }
        mu[i] = s / a[i][i];
    }
    let sign = if det < 0 { -1 } else { 1 };
    let den = det * sign;
    let mut lambda = Vec::with_capacity(k);
    let mut sum: i128 = 0;
    for &v in &mu[..m] {
        sum = sum.checked_add(v).ok_or(Outcome::Overflow)?;
    }
    lambda.push((det - sum) * sign);
    lambda.extend(mu[..m].iter().map(|v| v * sign));
    let mut num = Vec::with_capacity(dim);
    for t in 0..dim {
        let mut s = (p0[t] as i128).checked_mul(det).ok_or(Outcome::Overflow)?;
        for j in 0..m {
            s = s
                .checked_add(
                    mu[j]
                        .checked_mul(diffs[j][t] as i128)
                        .ok_or(Outcome::Overflow)?,
                )
                .ok_or(Outcome::Overflow)?;
        }
        num.push(s * sign);
    }
    Ok(AffineSolution { num, lambda, den })
}

/// Integer solve with an exact rational fallback on overflow.
pub fn affine_nearest_exact(pts: &[&[i64]]) -> Option<AffineSolution> {
    match affine_nearest_int(pts) {
        Ok(s) => Some(s),
        Err(Outcome::Dependent) => None,
        Err(Outcome::Overflow) => {
            let wv: Vec<WeightVector> = pts.iter().map(|p| WeightVector::from_ints(p)).collect();
            let refs: Vec<&WeightVector> = wv.iter().collect();
            let (x, lam) = affine_nearest(&refs)?;
            let mut den = BigInt::from(1);
            for c in x.coords.iter().chain(&lam) {
                den = den.lcm(c.denom());
            }
            let to = |c: &Rational| -> Option<i128> {
                (c * Rational::from_integer(den.clone()))
                    .to_integer()
                    .to_i128()
            };
            Some(AffineSolution {
                num: x.coords.iter().map(to).collect::<Option<_>>()?,
                lambda: lam.iter().map(to).collect::<Option<_>>()?,
                den: den.to_i128()?,
            })
        }
    }
}

/// Integer vector `v / g` with `g` the gcd of the entries and of `den`,
/// keeping the quotient equal to `v / den`. Returns the reduced numerators
/// and denominator.
pub fn reduce(v: &[i128], den: i128) -> (Vec<i128>, i128) {
    let mut g = den.abs();
    for &x in v {
        g = g.gcd(&x);
    }
    if g.is_zero() {
        return (v.to_vec(), den);
    }
    (v.iter().map(|x| x / g).collect(), den / g)
}

/// Converts reduced numerators over a denominator back into rationals.
pub fn to_rationals(v: &[i128], den: i128) -> Vec<Rational> {
    v.iter()
        .map(|&x| Rational::new(BigInt::from(x), BigInt::from(den)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::frac;

    #[test]
    fn matches_rational_solver() {
        let a = [3i64, -1, -2];
        let b = [-3i64, 2, 1];
        let c = [0i64, -3, 3];
        let pts: Vec<&[i64]> = vec![&a, &b, &c];
        let s = affine_nearest_int(&pts).unwrap();
        let wv: Vec<WeightVector> = pts.iter().map(|p| WeightVector::from_ints(p)).collect();
        let refs: Vec<&WeightVector> = wv.iter().collect();
        let (x, lam) = affine_nearest(&refs).unwrap();
        assert_eq!(s.point(), x.coords);
        let l: Vec<Rational> = s
            .lambda
            .iter()
            .map(|&v| frac(v as i64, s.den as i64))
            .collect();
        assert_eq!(l, lam);
    }

    #[test]
    fn dependent_points() {
        let a = [1i64, 0];
        let b = [2i64, 0];
        let c = [3i64, 0];
        assert_eq!(affine_nearest_int(&[&a, &b, &c]), Err(Outcome::Dependent));
        assert!(affine_nearest_exact(&[&a, &b, &c]).is_none());
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce(&[4, -6], 10), (vec![2, -3], 5));
    }
}
