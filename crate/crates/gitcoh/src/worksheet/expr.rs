//! Series expressions: `(1+t^2+t^10+t^12)/(1-t^4)(1-t^6)`, `BG(SL3)`,
//! `even[1,1,2,2]`, `$pg - t^2 * Proj(3)`.
//!
//! Juxtaposition binds tighter than `*` and `/`, so `1/(1-t^2)(1-t^4)` is
//! one over the product. Coefficient arrays are prefixes of a series: they
//! are only known through their last listed degree, and every value carries
//! the degree through which it is known.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{
    classifying_series, finite_geometric, invariant_torus_series, projective_series,
    GroupDescriptor, ProjSpec, Rational, SeriesError, TruncatedSeries,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {col}: {msg}")]
pub struct ExprError {
    /// 1-based character column inside the expression text.
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Int(BigInt),
    T,
    Ref(String),
    Array { even: bool, coeffs: Vec<Rational> },
    Builtin { name: String, args: Vec<String> },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Names referenced with `$name`, in order of appearance.
    pub fn refs(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<String>) {
        match self {
            Expr::Ref(r) => out.push(r.clone()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_refs(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            _ => {}
        }
    }

    /// True for a bare `$name`.
    pub fn is_reference(&self) -> bool {
        matches!(self, Expr::Ref(_))
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            col: self.pos + 1,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn uint(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().unwrap())
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.juxt()
    }

    fn starts_atom(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c == '(' || c == '$' || c == '[' || c.is_ascii_alphanumeric())
    }

    fn juxt(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.power()?;
        while self.starts_atom() {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.uint()?;
            let e = u32::try_from(e).or_else(|_| self.err("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn array(&mut self, even: bool) -> Result<Expr, ExprError> {
        self.expect('[')?;
        let mut coeffs = Vec::new();
        if !self.eat(']') {
            loop {
                let neg = self.eat('-');
                let n = self.uint()?;
                let mut q = Rational::from_integer(if neg { -n } else { n });
                if self.eat('/') {
                    let d = self.uint()?;
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    q /= Rational::from_integer(d);
                }
                coeffs.push(q);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        if coeffs.is_empty() {
            return self.err("empty coefficient array");
        }
        Ok(Expr::Array { even, coeffs })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let Some(c) = self.peek() else {
            return self.err("unexpected end of expression");
        };
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if c == '$' {
            self.pos += 1;
            let name = self.ident();
            if name.is_empty() {
                return self.err("expected a step name after '$'");
            }
            return Ok(Expr::Ref(name));
        }
        if c == '[' {
            return self.array(false);
        }
        if c.is_ascii_digit() {
            return Ok(Expr::Int(self.uint()?));
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            // `t` is the variable unless it starts a longer identifier
            if c == 't' && !self.chars.get(self.pos + 1).copied().is_some_and(is_ident) {
                self.pos += 1;
                return Ok(Expr::T);
            }
            let name = self.ident();
            if name == "even" {
                return self.array(true);
            }
            if !BUILTINS.contains(&name.as_str()) {
                self.pos = start;
                return self.err(format!("unknown name {name:?}"));
            }
            self.expect('(')?;
            let mut args = Vec::new();
            if !self.eat(')') {
                loop {
                    let a = self.ident();
                    if a.is_empty() {
                        return self.err("expected an argument");
                    }
                    args.push(a);
                    if self.eat(')') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            let e = Expr::Builtin { name, args };
            if let Err(msg) = check_builtin(&e) {
                self.pos = start;
                return self.err(msg);
            }
            return Ok(e);
        }
        self.err(format!("unexpected character {c:?}"))
    }
}

const BUILTINS: &[&str] = &["BG", "Proj", "WProj", "InvT", "Geom"];

fn num_arg(a: &str) -> Result<u32, String> {
    a.parse()
        .map_err(|_| format!("expected a nonnegative integer, got {a:?}"))
}

fn group_arg(a: &str) -> Result<GroupDescriptor, String> {
    let split = a.find(|c: char| c.is_ascii_digit()).unwrap_or(a.len());
    let (kind, n) = a.split_at(split);
    let n = if n.is_empty() {
        None
    } else {
        Some(num_arg(n)?)
    };
    let mut g = GroupDescriptor::default();
    match (kind, n) {
        ("T", Some(k)) => g.torus_rank = k,
        ("SL", Some(k)) if k >= 2 => g.sl_blocks.push(k),
        ("GL", Some(k)) if k >= 1 => g.gl_blocks.push(k),
        ("SO", Some(2)) => g.so2_factors = 1,
        ("SO", Some(3)) => g.so3_factors = 1,
        ("trivial", None) => {}
        _ => {
            return Err(format!(
                "unknown group {a:?} (use T<k>, SL<k>, GL<k>, SO2, SO3 or trivial)"
            ))
        }
    }
    Ok(g)
}

fn check_builtin(e: &Expr) -> Result<(), String> {
    let Expr::Builtin { name, args } = e else {
        return Ok(());
    };
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(format!("{name} takes {k} argument(s)"))
        }
    };
    match name.as_str() {
        "BG" => {
            if args.is_empty() {
                return Err("BG needs at least one group factor".into());
            }
            for a in args {
                group_arg(a)?;
            }
        }
        "Proj" | "InvT" => {
            arity(1)?;
            num_arg(&args[0])?;
        }
        "WProj" => {
            if args.is_empty() {
                return Err("WProj needs weights".into());
            }
            for a in args {
                if num_arg(a)? == 0 {
                    return Err("weights must be positive".into());
                }
            }
        }
        "Geom" => {
            arity(2)?;
            let lo = num_arg(&args[0])?;
            let hi = num_arg(&args[1])?;
            if lo > hi || lo % 2 == 1 || hi % 2 == 1 || lo == 0 {
                return Err(format!("Geom({lo},{hi}) needs even 2 <= lo <= hi"));
            }
        }
        _ => return Err(format!("unknown builtin {name}")),
    }
    Ok(())
}

/// Parses an expression.
pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// A value together with the degree through which it is known
/// (`None` for exact polynomials and closed forms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Value {
    pub series: TruncatedSeries,
    pub known: Option<usize>,
}

fn min_known(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown reference ${0}")]
    UnknownRef(String),
    #[error("${name} is only known through degree {have}, needed {needed}")]
    RefTooShort {
        name: String,
        have: usize,
        needed: usize,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Evaluates `e` at truncation order `n`. References resolve through `env`.
pub fn eval(e: &Expr, n: usize, env: &BTreeMap<String, Value>) -> Result<Value, EvalError> {
    let exact = |s: TruncatedSeries| Value {
        series: s,
        known: None,
    };
    Ok(match e {
        Expr::Int(i) => exact(TruncatedSeries::monomial(
            0,
            Rational::from_integer(i.clone()),
            n,
        )),
        Expr::T => exact(TruncatedSeries::monomial(
            1,
            Rational::from_integer(1.into()),
            n,
        )),
        Expr::Ref(r) => {
            let v = env.get(r).ok_or_else(|| EvalError::UnknownRef(r.clone()))?;
            let have = v.series.order();
            if have < n {
                return Err(EvalError::RefTooShort {
                    name: r.clone(),
                    have,
                    needed: n,
                });
            }
            Value {
                series: v.series.with_order(n),
                known: min_known(v.known, Some(have)),
            }
        }
        Expr::Array { even, coeffs } => {
            let step = if *even { 2 } else { 1 };
            let mut s = TruncatedSeries::zero(n);
            for (k, c) in coeffs.iter().enumerate() {
                if k * step <= n {
                    s.set_coeff(k * step, c.clone());
                }
            }
            Value {
                series: s,
                known: Some((coeffs.len() - 1) * step + step - 1),
            }
        }
        Expr::Builtin { name, args } => exact(eval_builtin(name, args, n)?),
        Expr::Neg(a) => {
            let v = eval(a, n, env)?;
            Value {
                series: -&v.series,
                known: v.known,
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            let x = eval(a, n, env)?;
            let y = eval(b, n, env)?;
            let series = match e {
                Expr::Add(..) => x.series.try_add(&y.series)?,
                Expr::Sub(..) => x.series.try_sub(&y.series)?,
                Expr::Mul(..) => x.series.try_mul(&y.series)?,
                _ => x.series.try_div(&y.series)?,
            };
            Value {
                series,
                known: min_known(x.known, y.known),
            }
        }
        Expr::Pow(a, k) => {
            let v = eval(a, n, env)?;
            let mut s = TruncatedSeries::one(n);
            for _ in 0..*k {
                s = &s * &v.series;
            }
            Value {
                series: s,
                known: v.known,
            }
        }
    })
}

fn eval_builtin(name: &str, args: &[String], n: usize) -> Result<TruncatedSeries, SeriesError> {
    let num = |i: usize| args[i].parse::<u32>().expect("checked at parse time");
    Ok(match name {
        "BG" => {
            let mut g = GroupDescriptor::default();
            for a in args {
                g = g.product(&group_arg(a).expect("checked at parse time"));
            }
            classifying_series(&g, n)
        }
        "Proj" => projective_series(&ProjSpec::Dim(num(0)), n),
        "WProj" => projective_series(&ProjSpec::Weighted((0..args.len()).map(num).collect()), n),
        "InvT" => invariant_torus_series(num(0), n),
        "Geom" => finite_geometric(num(0), num(1), n)?,
        _ => unreachable!("builtins are checked at parse time"),
    })
}

/// Parses and evaluates a closed expression (no references).
pub fn eval_str(src: &str, n: usize) -> Result<TruncatedSeries, String> {
    let e = parse_expr(src).map_err(|e| e.to_string())?;
    eval(&e, n, &BTreeMap::new())
        .map(|v| v.series)
        .map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::expand_rational;

    #[test]
    fn juxtaposition_binds_tighter_than_division() {
        let a = eval_str("(1+t^2+t^10+t^12)/(1-t^4)(1-t^6)", 16).unwrap();
        let b = expand_rational(
            &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1],
            &[(4, 1), (6, 1)],
            16,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coefficients_and_builtins() {
        assert_eq!(
            eval_str("2t^2 + 3", 2).unwrap(),
            TruncatedSeries::from_ints(&[3, 0, 2], 2)
        );
        assert_eq!(
            eval_str("BG(SL3)", 6).unwrap(),
            TruncatedSeries::from_ints(&[1, 0, 0, 0, 1, 0, 1], 6)
        );
        assert_eq!(
            eval_str("Geom(2,4)", 6).unwrap(),
            TruncatedSeries::from_ints(&[0, 0, 1, 0, 1], 6)
        );
        assert_eq!(
            eval_str("even[1,2,3]", 6).unwrap(),
            TruncatedSeries::from_ints(&[1, 0, 2, 0, 3], 6)
        );
        assert_eq!(
            eval_str("-[1/2, -1]", 1).unwrap().coeff(1),
            Rational::from_integer(1.into())
        );
    }

    #[test]
    fn array_known_degree() {
        let v = eval(
            &parse_expr("(1+t^2) even[1,1,2]").unwrap(),
            10,
            &BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(v.known, Some(5));
    }

    #[test]
    fn errors_have_columns() {
        let e = parse_expr("1 + Foo(3)").unwrap_err();
        assert_eq!(e.col, 5);
        let e = parse_expr("(1 - t^2").unwrap_err();
        assert_eq!(e.col, 9);
        assert!(eval_str("1/t^2", 4).is_err());
    }

    #[test]
    fn references() {
        let e = parse_expr("$a - 1").unwrap();
        assert_eq!(e.refs(), vec!["a".to_string()]);
        let mut env = BTreeMap::new();
        let a = TruncatedSeries::from_ints(&[1, 2], 1);
        env.insert(
            "a".to_string(),
            Value {
                series: a,
                known: None,
            },
        );
        assert!(matches!(
            eval(&e, 4, &env),
            Err(EvalError::RefTooShort { .. })
        ));
        assert_eq!(
            eval(&e, 1, &env).unwrap().series,
            TruncatedSeries::from_ints(&[0, 2], 1)
        );
    }
}
