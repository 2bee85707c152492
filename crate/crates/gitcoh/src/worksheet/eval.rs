//! Step-by-step evaluation of a [`Worksheet`] and comparison against its
//! expectations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::expr::{eval, Value};
use super::{SeriesExpr, Sign, Step, StepKind, Worksheet, WorksheetError};
use crate::kirwan::{
    blowup_correction, complete_fiber, decomp_pbundle, decomp_semismall, equivariant_ss_series,
    equivariant_ss_series_multi, ic_blowdown, BlowdownStep, BlowupStep, DecompKind, DecompStep,
};
use crate::series::{duality_complete, first_difference, is_palindromic, TruncatedSeries};

/// Outcome of comparing one step against its expectation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    /// Agreement in every degree through `through`.
    Match { through: usize },
    /// First degree where the values differ.
    Mismatch {
        degree: usize,
        computed: String,
        expected: String,
    },
    /// No expectation stored.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub name: String,
    pub kind: String,
    pub series: TruncatedSeries,
    /// Last degree that is determined by the inputs, when below the order.
    pub known_through: Option<usize>,
    pub status: Status,
    pub notes: Vec<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub truncation: usize,
    pub steps: Vec<StepReport>,
}

impl Report {
    pub fn step(&self, name: &str) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &StepReport> {
        self.steps
            .iter()
            .filter(|s| matches!(s.status, Status::Mismatch { .. }))
    }

    pub fn passed(&self) -> bool {
        self.mismatches().next().is_none()
    }

    /// Copy with every timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for s in &mut r.steps {
            s.elapsed_ms = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (mod t^{})", self.title, self.truncation + 1);
        for s in &self.steps {
            let _ = writeln!(out, "{}", step_text(s));
        }
        let n = self.mismatches().count();
        if n == 0 {
            let _ = writeln!(out, "all expectations met");
        } else {
            let _ = writeln!(out, "{n} mismatch(es)");
        }
        out
    }
}

/// One-paragraph text rendering of a step.
pub fn step_text(s: &StepReport) -> String {
    let status = match &s.status {
        Status::Match { through } => format!("match through t^{through}"),
        Status::Mismatch {
            degree,
            computed,
            expected,
        } => format!("MISMATCH at t^{degree}: computed {computed}, expected {expected}"),
        Status::None => "no expectation".to_string(),
    };
    let mut out = format!(
        "[{}] {} ({}, {:.1} ms)\n    {}",
        s.name, s.kind, status, s.elapsed_ms, s.series
    );
    for n in &s.notes {
        out.push_str("\n    note: ");
        out.push_str(n);
    }
    out
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

struct Ctx<'a> {
    env: &'a BTreeMap<String, Value>,
    step: &'a Step,
}

impl Ctx<'_> {
    fn fail(&self, msg: impl ToString) -> WorksheetError {
        WorksheetError::Step {
            step: self.step.name.clone(),
            msg: msg.to_string(),
        }
    }

    fn series(&self, e: &SeriesExpr, n: usize) -> Result<Value, WorksheetError> {
        eval(&e.expr, n, self.env).map_err(|err| self.fail(format!("{}: {err}", e.text)))
    }

    fn input(&self, name: &str, n: usize) -> Result<Value, WorksheetError> {
        let v = self
            .env
            .get(name)
            .ok_or_else(|| self.fail(format!("unknown input {name}")))?;
        if v.series.order() < n {
            return Err(self.fail(format!(
                "input {name} has order {}, step needs {n}",
                v.series.order()
            )));
        }
        Ok(Value {
            series: v.series.with_order(n),
            known: min_opt(v.known, Some(v.series.order())),
        })
    }
}

fn compare(computed: &Value, expected: &Value) -> Status {
    let order = computed.series.order();
    let through = [computed.known, expected.known]
        .into_iter()
        .flatten()
        .fold(order, usize::min);
    let a = computed.series.with_order(through);
    let b = expected.series.with_order(through);
    match first_difference(&a, &b) {
        None => Status::Match { through },
        Some(d) => Status::Mismatch {
            degree: d,
            computed: a.coeff(d).to_string(),
            expected: b.coeff(d).to_string(),
        },
    }
}

fn run_step(
    ws: &Worksheet,
    step: &Step,
    env: &BTreeMap<String, Value>,
) -> Result<(Value, Vec<String>), WorksheetError> {
    let ctx = Ctx { env, step };
    let n = step.truncation.unwrap_or(ws.truncation);
    let mut notes = Vec::new();
    let value = match &step.kind {
        StepKind::EquivariantSs {
            n_vars,
            degrees,
            codim_mode,
        } => {
            let mode = codim_mode.unwrap_or(ws.codim_mode);
            let s = match degrees.value.as_slice() {
                [d] => equivariant_ss_series(n_vars.value, *d, n, mode),
                ds => equivariant_ss_series_multi(n_vars.value, ds, n),
            }
            .map_err(|e| ctx.fail(e))?;
            notes.push(format!("codimension mode {mode}"));
            Value {
                series: s,
                known: None,
            }
        }
        StepKind::BlowupCorrection {
            d_r,
            center,
            removals,
        } => {
            let c = ctx.series(&center.value, n)?;
            let mut known = c.known;
            let mut terms = Vec::new();
            for r in removals {
                let v = ctx.series(&r.value.series, n)?;
                known = min_opt(known, v.known);
                terms.push((r.value.codim, v.series));
            }
            let b = BlowupStep {
                name: step.name.clone(),
                d_r: d_r.value,
                center_series: c.series,
                removal_terms: terms,
            };
            Value {
                series: blowup_correction(&b, n).map_err(|e| ctx.fail(e))?,
                known,
            }
        }
        StepKind::Sum { terms } => {
            let mut acc = TruncatedSeries::zero(n);
            let mut known = None;
            for (sign, name) in terms {
                let v = ctx.input(name, n)?;
                known = min_opt(known, v.known);
                acc = match sign {
                    Sign::Plus => &acc + &v.series,
                    Sign::Minus => &acc - &v.series,
                };
            }
            Value { series: acc, known }
        }
        StepKind::DualityComplete { input, complex_dim } => {
            let d = complex_dim.value;
            let v = ctx.input(input, d)?;
            if v.known.is_some_and(|k| k < d) {
                return Err(ctx.fail(format!(
                    "{input} is only known through t^{}",
                    v.known.unwrap()
                )));
            }
            let s = duality_complete(&v.series, d).map_err(|e| ctx.fail(e))?;
            let orig = &env[input].series;
            if orig.order() > d {
                let top = orig.order().min(2 * d);
                if let Some(k) = first_difference(&orig.with_order(top), &s.with_order(top)) {
                    notes.push(format!("input disagrees with its dual at t^{k}"));
                }
            }
            notes.push(format!(
                "palindromic of degree {}: {}",
                2 * d,
                if is_palindromic(&s) { "yes" } else { "no" }
            ));
            Value {
                series: s,
                known: None,
            }
        }
        StepKind::IcBlowdown {
            base,
            fiber,
            fiber_dim,
        } => {
            let d = fiber_dim.value;
            let b = ctx.series(&base.value, n)?;
            let f = ctx.series(&fiber.value, d)?;
            if f.known.is_some_and(|k| k < d) {
                return Err(ctx.fail(format!(
                    "fiber is only known through t^{}, needs t^{d}",
                    f.known.unwrap()
                )));
            }
            let g = complete_fiber(&f.series, d).map_err(|e| ctx.fail(e))?;
            let step_data = BlowdownStep {
                name: step.name.clone(),
                base_series: b.series,
                fiber_series: g,
                fiber_quotient_complex_dim: d,
            };
            Value {
                series: ic_blowdown(&step_data, n).map_err(|e| ctx.fail(e))?,
                known: b.known,
            }
        }
        StepKind::DecompPbundle {
            input,
            direction,
            z,
            c,
            m,
        } => {
            let k = ctx.input(input, n)?;
            let zv = ctx.series(&z.value, n)?;
            let d = DecompStep {
                kind: DecompKind::Pbundle,
                z_series: zv.series,
                codim_c: c.value,
                fiber_dim_m: m.value,
                ambient_dim_n: 0,
            };
            Value {
                series: decomp_pbundle(*direction, &k.series, &d, n).map_err(|e| ctx.fail(e))?,
                known: min_opt(k.known, zv.known),
            }
        }
        StepKind::DecompSemismall {
            input,
            z,
            m,
            n: amb,
        } => {
            let k = ctx.input(input, n)?;
            let zv = ctx.series(&z.value, n)?;
            let d = DecompStep {
                kind: DecompKind::Semismall,
                z_series: zv.series,
                codim_c: 0,
                fiber_dim_m: m.value,
                ambient_dim_n: amb.value,
            };
            Value {
                series: decomp_semismall(&k.series, &d, n).map_err(|e| ctx.fail(e))?,
                known: min_opt(k.known, zv.known),
            }
        }
        StepKind::SeriesLiteral { value } => ctx.series(&value.value, n)?,
    };
    Ok((value, notes))
}

/// Evaluates every step in order and compares against expectations.
pub fn evaluate_worksheet(ws: &Worksheet) -> Result<Report, WorksheetError> {
    let mut env: BTreeMap<String, Value> = BTreeMap::new();
    let mut steps = Vec::new();
    for step in &ws.steps {
        let start = Instant::now();
        let (value, notes) = run_step(ws, step, &env)?;
        let status = match &step.expect {
            None => Status::None,
            Some(e) => {
                let ctx = Ctx { env: &env, step };
                let expected = ctx.series(&e.value, value.series.order())?;
                compare(&value, &expected)
            }
        };
        let order = value.series.order();
        steps.push(StepReport {
            name: step.name.clone(),
            kind: step.kind.name().to_string(),
            series: value.series.clone(),
            known_through: value.known.filter(|&k| k < order),
            status,
            notes,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        env.insert(step.name.clone(), value);
    }
    Ok(Report {
        title: ws.title.clone(),
        truncation: ws.truncation,
        steps,
    })
}

/// Evaluates a worksheet that has at least one expectation.
pub fn verify_golden(ws: &Worksheet) -> Result<Report, WorksheetError> {
    if !ws.has_goldens() {
        return Err(WorksheetError::NoGoldens);
    }
    evaluate_worksheet(ws)
}

#[cfg(test)]
mod tests {
    use super::super::parse_worksheet;
    use super::*;

    const WS: &str = "[worksheet]\ntitle = t\ntruncation = 8\n\n[step a]\nkind = series_literal\nvalue = 1/(1-t^2) [TRIVIAL]\nexpect = even[1,1,1,1,1] [TRIVIAL]\n\n[step b]\nkind = sum\nterms = a - a\nexpect = 0 [TRIVIAL]\n";

    #[test]
    fn goldens_match() {
        let r = verify_golden(&parse_worksheet(WS).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.steps[0].status, Status::Match { through: 8 });
    }

    #[test]
    fn perturbed_golden_names_the_degree() {
        let ws = parse_worksheet(&WS.replace("even[1,1,1,1,1]", "even[1,1,2,1,1]")).unwrap();
        let r = verify_golden(&ws).unwrap();
        let m: Vec<_> = r.mismatches().collect();
        assert_eq!(m.len(), 1);
        assert_eq!(
            m[0].status,
            Status::Mismatch {
                degree: 4,
                computed: "1".into(),
                expected: "2".into()
            }
        );
    }

    #[test]
    fn no_goldens_is_an_error() {
        let text = WS
            .replace("expect = even[1,1,1,1,1] [TRIVIAL]\n", "")
            .replace("expect = 0 [TRIVIAL]\n", "");
        assert_eq!(
            verify_golden(&parse_worksheet(&text).unwrap()),
            Err(WorksheetError::NoGoldens)
        );
    }

    #[test]
    fn deterministic_up_to_timing() {
        let ws = parse_worksheet(WS).unwrap();
        let a = evaluate_worksheet(&ws).unwrap().without_timing();
        let b = evaluate_worksheet(&ws).unwrap().without_timing();
        assert_eq!(a, b);
    }
}
