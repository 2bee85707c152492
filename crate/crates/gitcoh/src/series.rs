//! Truncated power series in `t` with exact rational coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of degrees
//! `0..=N`. Every Poincaré series in the crate lives in this ring, so the
//! operations here never read or write above the truncation order.
//!
//! The module also carries the small catalogue of standard series that the
//! cohomology computations keep reaching for: classifying spaces of tori and
//! `SL`/`GL` blocks, projective spaces, and symmetric-group invariants of a
//! torus.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number; always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Working truncation order used when nothing else is specified.
pub const DEFAULT_TRUNCATION: usize = 20;

/// Builds an integral [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the reduced fraction `n/d`.
///
/// # Panics
/// Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("denominator factor (1 - t^{0}) is not allowed; exponents must be at least 2")]
    BadFactor(u32),
    #[error("finite geometric range is invalid: lo={lo}, hi={hi}")]
    BadRange { lo: u32, hi: u32 },
    #[error("duality needs coefficients through degree {needed}, series has order {have}")]
    TooShort { needed: usize, have: usize },
    #[error("degree {degree} is {given} but its mirror degree {mirror} is {expected}")]
    OverlapInconsistency {
        degree: usize,
        given: Box<Rational>,
        mirror: usize,
        expected: Box<Rational>,
    },
    #[error("cannot parse series: {0}")]
    Parse(String),
    #[error("series with zero constant term has no inverse")]
    NotInvertible,
}

/// Binary ring operation selector used by [`ring_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

/// Power series truncated at a fixed order: coefficients of `t^0 ..= t^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// The zero series of order `n`.
    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); n + 1],
        }
    }

    /// The constant series `1` of order `n`.
    pub fn one(n: usize) -> Self {
        Self::monomial(0, rat(1), n)
    }

    /// `c * t^k`, truncated at `n` (zero when `k > n`).
    pub fn monomial(k: usize, c: Rational, n: usize) -> Self {
        let mut s = Self::zero(n);
        if k <= n {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series from explicit coefficients; entries above `n` are dropped and
    /// missing ones are zero.
    pub fn from_coeffs(coeffs: Vec<Rational>, n: usize) -> Self {
        let mut c = coeffs;
        c.resize(n + 1, Rational::zero());
        Self { coeffs: c }
    }

    /// Series from integer coefficients, `coeffs[i]` being the coefficient of `t^i`.
    pub fn from_ints(coeffs: &[i64], n: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect(), n)
    }

    /// Series with integer coefficients given on even degrees only:
    /// `evens[k]` is the coefficient of `t^(2k)`.
    pub fn from_even_ints(evens: &[i64], n: usize) -> Self {
        let mut s = Self::zero(n);
        for (k, &c) in evens.iter().enumerate() {
            if 2 * k <= n {
                s.coeffs[2 * k] = rat(c);
            }
        }
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`; zero above the truncation order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Sets the coefficient of `t^k`; ignored above the truncation order.
    pub fn set_coeff(&mut self, k: usize, c: Rational) {
        if k <= self.order() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients as `i64` if all of them are integers that fit.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Integer coefficients of the even degrees `t^0, t^2, ...`.
    pub fn even_ints(&self) -> Option<Vec<i64>> {
        Some(self.to_ints()?.into_iter().step_by(2).collect())
    }

    /// Re-truncates (or zero-extends) to order `n`.
    pub fn with_order(&self, n: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), n)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut s = Self::zero(n);
        for i in 0..=n {
            if i + k > n {
                break;
            }
            s.coeffs[i + k] = self.coeffs[i].clone();
        }
        s
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplies by `1/(1 - t^a)^e` in place of a full product, which is
    /// the hot path of every classifying-space expansion.
    pub fn div_one_minus(&self, a: usize, e: u32) -> Self {
        let n = self.order();
        let mut c = self.coeffs.clone();
        if a == 0 {
            return Self { coeffs: c };
        }
        for _ in 0..e {
            for k in a..=n {
                let prev = c[k - a].clone();
                c[k] += prev;
            }
        }
        Self { coeffs: c }
    }

    /// Multiplies by `(1 - t^a)^e`.
    pub fn mul_one_minus(&self, a: usize, e: u32) -> Self {
        let n = self.order();
        let mut c = self.coeffs.clone();
        for _ in 0..e {
            for k in (a..=n).rev() {
                let prev = c[k - a].clone();
                c[k] -= prev;
            }
        }
        Self { coeffs: c }
    }

    /// True when all coefficients of odd degree vanish.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn try_inverse(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let n = self.order();
        let inv0 = a0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// `self / other` via the inverse of `other`.
    pub fn try_div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_mul(&other.try_inverse()?)
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            /// # Panics
            /// Panics when the truncation orders differ; use the `try_` method to get an error instead.
            fn $m(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                self.$f(rhs).expect("series truncation orders must match")
            }
        }
        impl std::ops::$tr<TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl std::ops::Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Coefficientwise sum/difference or truncated Cauchy product.
pub fn ring_op(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    op: RingOp,
) -> Result<TruncatedSeries, SeriesError> {
    match op {
        RingOp::Add => a.try_add(b),
        RingOp::Sub => a.try_sub(b),
        RingOp::Mul => a.try_mul(b),
    }
}

/// Expands `P(t) / prod (1 - t^a)^e` to order `n`.
///
/// `numerator[i]` is the coefficient of `t^i`.
pub fn expand_rational(
    numerator: &[i64],
    factors: &[(u32, u32)],
    n: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let num: Vec<Rational> = numerator.iter().map(|&c| rat(c)).collect();
    expand_rational_q(&num, factors, n)
}

/// [`expand_rational`] with a rational numerator.
pub fn expand_rational_q(
    numerator: &[Rational],
    factors: &[(u32, u32)],
    n: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::from_coeffs(numerator.to_vec(), n);
    for &(a, e) in factors {
        if a < 2 {
            return Err(SeriesError::BadFactor(a));
        }
        s = s.div_one_minus(a as usize, e);
    }
    Ok(s)
}

/// `t^lo + t^(lo+2) + ... + t^hi`, truncated at `n`.
pub fn finite_geometric(lo: u32, hi: u32, n: usize) -> Result<TruncatedSeries, SeriesError> {
    if lo > hi || !lo.is_multiple_of(2) || !hi.is_multiple_of(2) {
        return Err(SeriesError::BadRange { lo, hi });
    }
    let mut s = TruncatedSeries::zero(n);
    for k in (lo..=hi).step_by(2) {
        s.set_coeff(k as usize, rat(1));
    }
    Ok(s)
}

/// A reductive group up to isogeny, described by its factors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub torus_rank: u32,
    pub sl_blocks: Vec<u32>,
    pub gl_blocks: Vec<u32>,
    pub so2_factors: u32,
    pub so3_factors: u32,
}

impl GroupDescriptor {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn torus(rank: u32) -> Self {
        Self {
            torus_rank: rank,
            ..Self::default()
        }
    }

    pub fn sl(n: u32) -> Self {
        Self {
            sl_blocks: vec![n],
            ..Self::default()
        }
    }

    pub fn gl(n: u32) -> Self {
        Self {
            gl_blocks: vec![n],
            ..Self::default()
        }
    }

    /// Direct product of two descriptors.
    pub fn product(&self, other: &Self) -> Self {
        let mut sl = self.sl_blocks.clone();
        sl.extend(&other.sl_blocks);
        let mut gl = self.gl_blocks.clone();
        gl.extend(&other.gl_blocks);
        Self {
            torus_rank: self.torus_rank + other.torus_rank,
            sl_blocks: sl,
            gl_blocks: gl,
            so2_factors: self.so2_factors + other.so2_factors,
            so3_factors: self.so3_factors + other.so3_factors,
        }
    }

    /// Degrees `a` of the factors `1/(1 - t^a)` making up `P_t(BG)`.
    pub fn generator_degrees(&self) -> Vec<u32> {
        let mut out = vec![2; self.torus_rank as usize];
        for &n in &self.sl_blocks {
            out.extend((2..=n).map(|i| 2 * i));
        }
        for &n in &self.gl_blocks {
            out.extend((1..=n).map(|i| 2 * i));
        }
        out.extend(std::iter::repeat_n(2, self.so2_factors as usize));
        out.extend(std::iter::repeat_n(4, self.so3_factors as usize));
        out.sort_unstable();
        out
    }
}

/// Rational Poincaré series of the classifying space `BG`.
pub fn classifying_series(g: &GroupDescriptor, n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(n);
    for a in g.generator_degrees() {
        s = s.div_one_minus(a as usize, 1);
    }
    s
}

/// Projective space given by its dimension or by the weights of a weighted
/// projective space. Over `Q` both have the Betti numbers of `P^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjSpec {
    Dim(u32),
    Weighted(Vec<u32>),
}

impl ProjSpec {
    pub fn dimension(&self) -> u32 {
        match self {
            ProjSpec::Dim(n) => *n,
            ProjSpec::Weighted(w) => w.len().saturating_sub(1) as u32,
        }
    }
}

/// `1 + t^2 + ... + t^(2k)` for a (weighted) projective space of dimension `k`.
pub fn projective_series(p: &ProjSpec, n: usize) -> TruncatedSeries {
    let k = p.dimension() as usize;
    let mut s = TruncatedSeries::zero(n);
    for i in 0..=k {
        s.set_coeff(2 * i, rat(1));
    }
    s
}

/// `S_k`-invariants of `H*(BT)` for a rank-`k` torus permuted by `S_k`:
/// `1 / prod_{i=1..k} (1 - t^(2i))`.
pub fn invariant_torus_series(k: u32, n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(n);
    for i in 1..=k as usize {
        s = s.div_one_minus(2 * i, 1);
    }
    s
}

/// Completes a series known through degree `complex_dim` to the palindromic
/// polynomial of degree `2 * complex_dim`.
///
/// Degrees above `complex_dim` that are present in `s` must agree with their
/// mirror images.
pub fn duality_complete(
    s: &TruncatedSeries,
    complex_dim: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let d = complex_dim;
    if s.order() < d {
        return Err(SeriesError::TooShort {
            needed: d,
            have: s.order(),
        });
    }
    let top = 2 * d;
    let mut out = TruncatedSeries::zero(top);
    for i in 0..=d {
        out.set_coeff(i, s.coeff(i));
        out.set_coeff(top - i, s.coeff(i));
    }
    for k in d + 1..=s.order().min(top) {
        let given = s.coeff(k);
        let expected = out.coeff(k);
        if given != expected {
            return Err(SeriesError::OverlapInconsistency {
                degree: k,
                given: Box::new(given),
                mirror: top - k,
                expected: Box::new(expected),
            });
        }
    }
    for k in top + 1..=s.order() {
        if !s.coeff(k).is_zero() {
            return Err(SeriesError::OverlapInconsistency {
                degree: k,
                given: Box::new(s.coeff(k)),
                mirror: k,
                expected: Box::new(Rational::zero()),
            });
        }
    }
    Ok(out)
}

/// True if the polynomial is palindromic with respect to its order.
pub fn is_palindromic(s: &TruncatedSeries) -> bool {
    let n = s.order();
    (0..=n).all(|k| s.coeff(k) == s.coeff(n - k))
}

/// First degree where the two series differ, comparing up to the smaller order.
pub fn first_difference(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<usize> {
    (0..=a.order().min(b.order())).find(|&k| a.coeff(k) != b.coeff(k))
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn parse_rational(s: &str) -> Result<Rational, SeriesError> {
    let s = s.trim();
    let bad = || SeriesError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Renders as `1 + 9t^2 - 1/2t^3 + O(t^21)`.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if mag.is_one() && k > 0 {
                String::new()
            } else {
                fmt_rational(&mag)
            };
            match k {
                0 => write!(f, "{}", fmt_rational(&mag))?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl FromStr for TruncatedSeries {
    type Err = SeriesError;

    /// Parses the [`Display`](fmt::Display) form. The `O(t^M)` tail is
    /// required because it carries the truncation order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, order) = match compact.rfind("O(t^") {
            Some(pos) if compact.ends_with(')') => {
                let m: usize = compact[pos + 4..compact.len() - 1]
                    .parse()
                    .map_err(|_| SeriesError::Parse("bad O(t^M) tail".into()))?;
                if m == 0 {
                    return Err(SeriesError::Parse("truncation O(t^0) is empty".into()));
                }
                let body = compact[..pos].trim_end_matches('+');
                (body.to_string(), m - 1)
            }
            _ => return Err(SeriesError::Parse("missing O(t^M) tail".into())),
        };
        let mut out = TruncatedSeries::zero(order);
        if body == "0" || body.is_empty() {
            return Ok(out);
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in body.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (sign, t) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, deg) = match t.find('t') {
                Some(p) => {
                    let c = if p == 0 {
                        rat(1)
                    } else {
                        parse_rational(&t[..p])?
                    };
                    let rest = &t[p + 1..];
                    let d = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| {
                                SeriesError::Parse(format!("bad exponent in {term:?}"))
                            })?
                    };
                    (c, d)
                }
                None => (parse_rational(t)?, 0),
            };
            if deg <= order {
                let c = out.coeff(deg) + coef * rat(sign);
                out.set_coeff(deg, c);
            }
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    truncation: usize,
    coeffs: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            truncation: self.order(),
            coeffs: self.coeffs.iter().map(fmt_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        if j.coeffs.len() > j.truncation + 1 {
            return Err(serde::de::Error::custom(
                "more coefficients than truncation + 1",
            ));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(TruncatedSeries::from_coeffs(coeffs, j.truncation))
    }
}
