//! Exact nearest point of a convex hull to the origin.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::series::Rational;
use crate::weights::{inner, WeightVector};

/// Nearest point together with a barycentric witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullCertificate {
    pub point: WeightVector,
    /// Generator index to its (positive) coefficient.
    pub barycentric: BTreeMap<usize, Rational>,
}

impl HullCertificate {
    /// Checks the certificate against the generators exactly: coefficients
    /// are nonnegative and sum to one, they reproduce the point, and every
    /// generator lies on the far side of the supporting hyperplane.
    pub fn verify(&self, points: &[WeightVector]) -> bool {
        let dim = self.point.dim();
        if self.barycentric.values().any(|l| l < &Rational::zero()) {
            return false;
        }
        let total: Rational = self.barycentric.values().sum();
        if !total.is_one() {
            return false;
        }
        let mut acc = vec![Rational::zero(); dim];
        for (&i, l) in &self.barycentric {
            let Some(p) = points.get(i) else { return false };
            if p.dim() != dim {
                return false;
            }
            for (a, c) in acc.iter_mut().zip(&p.coords) {
                *a += l * c;
            }
        }
        if acc != self.point.coords {
            return false;
        }
        let nn = self.point.norm_sq();
        points
            .iter()
            .all(|p| inner(&self.point, p).map(|v| v >= nn).unwrap_or(false))
    }
}

/// Solves `a x = b` over `Q`; `None` when `a` is singular.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = b.len();
    for c in 0..m {
        let piv = (c..m).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        b.swap(c, piv);
        let inv = Rational::one() / &a[c][c];
        let pivot = a[c].clone();
        for r in 0..m {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for (x, p) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * p;
            }
            let v = &f * &b[c];
            b[r] -= v;
        }
    }
    Some((0..m).map(|i| &b[i] / &a[i][i]).collect())
}

/// Nearest point to the origin of the affine span of `pts`, with its affine
/// coefficients. `None` when the points are affinely dependent.
pub fn affine_nearest(pts: &[&WeightVector]) -> Option<(WeightVector, Vec<Rational>)> {
    let p0 = pts[0];
    let diffs: Vec<WeightVector> = pts[1..].iter().map(|p| p.sub(p0)).collect();
    let m = diffs.len();
    let gram: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| inner(&diffs[i], &diffs[j]).expect("same dimension"))
                .collect()
        })
        .collect();
    let rhs: Vec<Rational> = diffs
        .iter()
        .map(|d| -inner(d, p0).expect("same dimension"))
        .collect();
    let mu = solve_linear(gram, rhs)?;
    let mut x = p0.coords.clone();
    for (mj, d) in mu.iter().zip(&diffs) {
        for (xi, di) in x.iter_mut().zip(&d.coords) {
            *xi += mj * di;
        }
    }
    let mut lam = vec![Rational::one() - mu.iter().sum::<Rational>()];
    lam.extend(mu);
    Some((WeightVector::new(x), lam))
}

/// Minimiser of `|x|^2` over the convex hull of `points`, computed with
/// Wolfe's algorithm in exact arithmetic.
///
/// # Panics
/// Panics if `points` is empty or the dimensions differ.
pub fn nearest_point_hull(points: &[WeightVector]) -> HullCertificate {
    assert!(
        !points.is_empty(),
        "nearest_point_hull needs at least one point"
    );
    let dim = points[0].dim();
    assert!(
        points.iter().all(|p| p.dim() == dim),
        "points must share a dimension"
    );

    let norms: Vec<Rational> = points.iter().map(WeightVector::norm_sq).collect();
    let start = (0..points.len())
        .min_by(|&a, &b| norms[a].cmp(&norms[b]))
        .unwrap();
    let mut set = vec![start];
    let mut lam = vec![Rational::one()];
    let mut x = points[start].clone();

    loop {
        let xx = x.norm_sq();
        let (j, best) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, inner(&x, p).unwrap()))
            .min_by(|a, b| a.1.cmp(&b.1))
            .unwrap();
        if best >= xx || set.contains(&j) {
            break;
        }
        set.push(j);
        lam.push(Rational::zero());
        loop {
            let pts: Vec<&WeightVector> = set.iter().map(|&i| &points[i]).collect();
            let Some((y, mu)) = affine_nearest(&pts) else {
                return face_enumeration(points);
            };
            if mu.iter().all(|m| m > &Rational::zero()) {
                x = y;
                lam = mu;
                break;
            }
            let theta = lam
                .iter()
                .zip(&mu)
                .filter(|(_, m)| *m <= &Rational::zero())
                .map(|(l, m)| l / (l - m))
                .min()
                .unwrap();
            let one_minus = Rational::one() - &theta;
            x = WeightVector::new(
                x.coords
                    .iter()
                    .zip(&y.coords)
                    .map(|(a, b)| &one_minus * a + &theta * b)
                    .collect(),
            );
            lam = lam
                .iter()
                .zip(&mu)
                .map(|(l, m)| &one_minus * l + &theta * m)
                .collect();
            let keep: Vec<bool> = lam.iter().map(|l| !l.is_zero()).collect();
            set = set
                .iter()
                .zip(&keep)
                .filter(|(_, k)| **k)
                .map(|(s, _)| *s)
                .collect();
            lam.retain(|l| !l.is_zero());
        }
    }
    HullCertificate {
        point: x,
        barycentric: set.into_iter().zip(lam).collect(),
    }
}

/// Brute-force nearest point: best candidate over every subset whose affine
/// nearest point has nonnegative coefficients. Exponential; meant as an
/// oracle for small inputs.
pub fn face_enumeration(points: &[WeightVector]) -> HullCertificate {
    assert!(
        !points.is_empty(),
        "face_enumeration needs at least one point"
    );
    assert!(
        points.len() < 24,
        "face_enumeration is exponential in the point count"
    );
    let mut best: Option<HullCertificate> = None;
    for mask in 1u32..(1 << points.len()) {
        let idx: Vec<usize> = (0..points.len()).filter(|i| mask & (1 << i) != 0).collect();
        let pts: Vec<&WeightVector> = idx.iter().map(|&i| &points[i]).collect();
        let Some((x, lam)) = affine_nearest(&pts) else {
            continue;
        };
        if lam.iter().any(|l| l < &Rational::zero()) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => x.norm_sq() < b.point.norm_sq(),
        };
        if better {
            best = Some(HullCertificate {
                point: x,
                barycentric: idx
                    .into_iter()
                    .zip(lam)
                    .filter(|(_, l)| !l.is_zero())
                    .collect(),
            });
        }
    }
    best.expect("singletons are always candidates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{frac, rat};

    fn wv(v: &[i64]) -> WeightVector {
        WeightVector::from_ints(v)
    }

    #[test]
    fn origin_inside() {
        let pts = vec![wv(&[1, 0]), wv(&[-1, 1]), wv(&[0, -1]), wv(&[0, 0])];
        let c = nearest_point_hull(&pts);
        assert!(c.point.is_zero());
        assert!(c.verify(&pts));
    }

    #[test]
    fn symmetric_pair() {
        let pts = vec![wv(&[1, -1]), wv(&[-1, 1])];
        let c = nearest_point_hull(&pts);
        assert!(c.point.is_zero());
        assert_eq!(
            c.barycentric.values().cloned().collect::<Vec<_>>(),
            vec![frac(1, 2), frac(1, 2)]
        );
    }

    #[test]
    fn segment_interior() {
        let pts = vec![wv(&[2, 0]), wv(&[0, 2])];
        let c = nearest_point_hull(&pts);
        assert_eq!(c.point.coords, vec![rat(1), rat(1)]);
        assert!(c.verify(&pts));
        assert_eq!(c, face_enumeration(&pts));
    }

    #[test]
    fn bad_certificate_is_rejected() {
        let pts = vec![wv(&[2, 0]), wv(&[0, 2])];
        let mut c = nearest_point_hull(&pts);
        c.point = wv(&[2, 0]);
        assert!(!c.verify(&pts));
    }

    #[test]
    fn linear_solve() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        assert_eq!(
            solve_linear(a, vec![rat(3), rat(5)]).unwrap(),
            vec![frac(4, 5), frac(7, 5)]
        );
        assert!(solve_linear(
            vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]],
            vec![rat(0), rat(0)]
        )
        .is_none());
    }
}
