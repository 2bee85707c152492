//! Worksheets: ordered ledgers of series computations with stored
//! expectations.
//!
//! A worksheet is plain text made of sections. The `[worksheet]` section
//! holds metadata, every `[step NAME]` section one computation:
//!
//! ```text
//! [worksheet]
//! title = plane cubics
//! truncation = 30
//!
//! [step pg]
//! kind = equivariant_ss
//! n_vars = 3
//! degree = 3
//! expect = (1+t^2+t^10+t^12)/(1-t^4)(1-t^6) [DERIVED "closed form of the recursion"]
//! ```
//!
//! Series-valued entries are expressions (see [`expr`]) and must carry a
//! source tag: `[PAPER <section> "<citation>"]`, `[DERIVED <note>]` or
//! `[TRIVIAL <note>]`. A bare reference such as `$pg` needs no tag.
//! Indented lines continue the previous value; `#` starts a comment line.

pub mod eval;
pub mod expr;

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::{evaluate_worksheet, verify_golden, Report, Status, StepReport};
pub use expr::{parse_expr, Expr};

use crate::strata::CodimMode;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorksheetError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: unknown step kind {kind:?}")]
    UnknownKind { line: usize, kind: String },
    #[error(
        "line {line}: step {step:?} refers to {name:?}, which is not defined by an earlier step"
    )]
    UnresolvedRef {
        line: usize,
        step: String,
        name: String,
    },
    #[error("step {step:?}: missing key {key:?}")]
    MissingKey { step: String, key: String },
    #[error("line {line}: {key} needs a source tag")]
    MissingSource { line: usize, key: String },
    #[error("line {line}: duplicate step name {name:?}")]
    DuplicateStep { line: usize, name: String },
    #[error("worksheet has no expectations to verify")]
    NoGoldens,
    #[error("step {step:?}: {msg}")]
    Step { step: String, msg: String },
}

/// Where a literal comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    /// Quoted from the literature: a section label and the quoted text.
    Cited { section: String, citation: String },
    /// Recomputed independently; the note says how.
    Derived { note: String },
    /// Forced by definitions.
    Trivial { note: String },
}

const CITED: &str = "PAPER";
const DERIVED: &str = "DERIVED";
const TRIVIAL: &str = "TRIVIAL";

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, body) = match self {
            Source::Cited { section, citation } => {
                let sec = if section.is_empty() {
                    String::new()
                } else {
                    format!("{section} ")
                };
                (CITED, format!(" {sec}\"{citation}\""))
            }
            Source::Derived { note } => (
                DERIVED,
                if note.is_empty() {
                    String::new()
                } else {
                    format!(" {note}")
                },
            ),
            Source::Trivial { note } => (
                TRIVIAL,
                if note.is_empty() {
                    String::new()
                } else {
                    format!(" {note}")
                },
            ),
        };
        write!(f, "[{kind}{body}]")
    }
}

/// A value with an optional source tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub value: T,
    pub source: Option<Source>,
}

impl<T> Tagged<T> {
    pub fn new(value: T) -> Self {
        Self {
            value,
            source: None,
        }
    }
}

/// An expression with the text it was parsed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesExpr {
    pub text: String,
    pub expr: Expr,
}

impl SeriesExpr {
    pub fn parse(text: &str) -> Result<Self, expr::ExprError> {
        Ok(Self {
            text: text.trim().to_string(),
            expr: parse_expr(text)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub codim: u32,
    pub series: SeriesExpr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

pub use crate::kirwan::Direction;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    EquivariantSs {
        n_vars: Tagged<usize>,
        degrees: Tagged<Vec<u32>>,
        codim_mode: Option<CodimMode>,
    },
    BlowupCorrection {
        d_r: Tagged<u32>,
        center: Tagged<SeriesExpr>,
        removals: Vec<Tagged<Removal>>,
    },
    Sum {
        terms: Vec<(Sign, String)>,
    },
    DualityComplete {
        input: String,
        complex_dim: Tagged<usize>,
    },
    IcBlowdown {
        base: Tagged<SeriesExpr>,
        fiber: Tagged<SeriesExpr>,
        fiber_dim: Tagged<usize>,
    },
    DecompPbundle {
        input: String,
        direction: Direction,
        z: Tagged<SeriesExpr>,
        c: Tagged<i64>,
        m: Tagged<u32>,
    },
    DecompSemismall {
        input: String,
        z: Tagged<SeriesExpr>,
        m: Tagged<u32>,
        n: Tagged<i64>,
    },
    SeriesLiteral {
        value: Tagged<SeriesExpr>,
    },
}

impl StepKind {
    pub fn name(&self) -> &'static str {
        match self {
            StepKind::EquivariantSs { .. } => "equivariant_ss",
            StepKind::BlowupCorrection { .. } => "blowup_correction",
            StepKind::Sum { .. } => "sum",
            StepKind::DualityComplete { .. } => "duality_complete",
            StepKind::IcBlowdown { .. } => "ic_blowdown",
            StepKind::DecompPbundle { .. } => "decomp_pbundle",
            StepKind::DecompSemismall { .. } => "decomp_semismall",
            StepKind::SeriesLiteral { .. } => "series_literal",
        }
    }

    /// Names of earlier steps this one reads.
    pub fn dependencies(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut from = |e: &SeriesExpr| out.extend(e.expr.refs());
        match self {
            StepKind::EquivariantSs { .. } => {}
            StepKind::BlowupCorrection {
                center, removals, ..
            } => {
                from(&center.value);
                for r in removals {
                    from(&r.value.series);
                }
            }
            StepKind::Sum { terms } => return terms.iter().map(|t| t.1.clone()).collect(),
            StepKind::DualityComplete { input, .. } => return vec![input.clone()],
            StepKind::IcBlowdown { base, fiber, .. } => {
                from(&base.value);
                from(&fiber.value);
            }
            StepKind::DecompPbundle { input, z, .. }
            | StepKind::DecompSemismall { input, z, .. } => {
                from(&z.value);
                out.insert(0, input.clone());
            }
            StepKind::SeriesLiteral { value } => from(&value.value),
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub kind: StepKind,
    pub truncation: Option<usize>,
    pub expect: Option<Tagged<SeriesExpr>>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Worksheet {
    pub title: String,
    pub truncation: usize,
    pub codim_mode: CodimMode,
    pub steps: Vec<Step>,
}

impl Worksheet {
    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn has_goldens(&self) -> bool {
        self.steps.iter().any(|s| s.expect.is_some())
    }

    /// Number of steps of each kind, in order of first appearance.
    pub fn kind_counts(&self) -> Vec<(&'static str, usize)> {
        let mut out: Vec<(&'static str, usize)> = Vec::new();
        for s in &self.steps {
            let k = s.kind.name();
            match out.iter_mut().find(|e| e.0 == k) {
                Some(e) => e.1 += 1,
                None => out.push((k, 1)),
            }
        }
        out
    }
}

struct Entry {
    key: String,
    value: String,
    line: usize,
    /// 1-based column of the first value character.
    col: usize,
}

struct Section {
    header: String,
    line: usize,
    entries: Vec<Entry>,
}

fn split_sections(text: &str) -> Result<Vec<Section>, WorksheetError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if raw.starts_with(char::is_whitespace) {
            let Some(e) = sections.last_mut().and_then(|s| s.entries.last_mut()) else {
                return Err(WorksheetError::Syntax {
                    line,
                    col: 1,
                    msg: "continuation line without a preceding key".into(),
                });
            };
            e.value.push(' ');
            e.value.push_str(trimmed);
            continue;
        }
        if trimmed.starts_with('[') {
            if !trimmed.ends_with(']') {
                return Err(WorksheetError::Syntax {
                    line,
                    col: trimmed.len() + 1,
                    msg: "expected ']' closing the section header".into(),
                });
            }
            sections.push(Section {
                header: trimmed[1..trimmed.len() - 1].trim().to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = raw.find('=') else {
            return Err(WorksheetError::Syntax {
                line,
                col: 1,
                msg: "expected 'key = value'".into(),
            });
        };
        let Some(sec) = sections.last_mut() else {
            return Err(WorksheetError::Syntax {
                line,
                col: 1,
                msg: "entry before the first section".into(),
            });
        };
        let after = &raw[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        sec.entries.push(Entry {
            key: raw[..eq].trim().to_string(),
            value: after.trim().to_string(),
            line,
            col: raw[..eq + 1 + lead].chars().count() + 1,
        });
    }
    Ok(sections)
}

/// Splits a trailing source tag off a value.
fn split_source(e: &Entry) -> Result<(String, Option<Source>), WorksheetError> {
    let v = &e.value;
    let start = [CITED, DERIVED, TRIVIAL]
        .iter()
        .filter_map(|k| v.find(&format!("[{k}")))
        .min();
    let Some(start) = start else {
        return Ok((v.clone(), None));
    };
    let syntax = |msg: &str| WorksheetError::Syntax {
        line: e.line,
        col: e.col + v[..start].chars().count(),
        msg: msg.to_string(),
    };
    if !v.ends_with(']') {
        return Err(syntax("source tag must end the value"));
    }
    let body = v[start + 1..v.len() - 1].trim();
    let (kind, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
    let rest = rest.trim().to_string();
    let source = match kind {
        CITED => {
            let (Some(a), Some(b)) = (rest.find('"'), rest.rfind('"')) else {
                return Err(syntax("a citation tag needs quoted text"));
            };
            if a == b {
                return Err(syntax("unterminated quoted citation"));
            }
            Source::Cited {
                section: rest[..a].trim().to_string(),
                citation: rest[a + 1..b].to_string(),
            }
        }
        DERIVED => Source::Derived { note: rest },
        TRIVIAL => Source::Trivial { note: rest },
        _ => return Err(syntax("unknown source tag")),
    };
    Ok((v[..start].trim().to_string(), Some(source)))
}

struct StepBuilder<'a> {
    name: &'a str,
    entries: Vec<&'a Entry>,
    used: BTreeSet<usize>,
}

impl<'a> StepBuilder<'a> {
    fn all(&mut self, key: &str) -> Vec<&'a Entry> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            if e.key == key {
                self.used.insert(i);
                out.push(*e);
            }
        }
        out
    }

    fn opt(&mut self, key: &str) -> Result<Option<&'a Entry>, WorksheetError> {
        let v = self.all(key);
        if v.len() > 1 {
            return Err(WorksheetError::Syntax {
                line: v[1].line,
                col: 1,
                msg: format!("key {key:?} given twice"),
            });
        }
        Ok(v.first().copied())
    }

    fn req(&mut self, key: &str) -> Result<&'a Entry, WorksheetError> {
        self.opt(key)?.ok_or_else(|| WorksheetError::MissingKey {
            step: self.name.to_string(),
            key: key.to_string(),
        })
    }
}

fn scalar<T: std::str::FromStr>(e: &Entry) -> Result<Tagged<T>, WorksheetError> {
    let (v, source) = split_source(e)?;
    let value = v.parse().map_err(|_| WorksheetError::Syntax {
        line: e.line,
        col: e.col,
        msg: format!("invalid value {v:?} for {}", e.key),
    })?;
    Ok(Tagged { value, source })
}

fn plain(e: &Entry) -> Result<String, WorksheetError> {
    let (v, source) = split_source(e)?;
    if source.is_some() {
        return Err(WorksheetError::Syntax {
            line: e.line,
            col: e.col,
            msg: format!("{} does not take a source tag", e.key),
        });
    }
    Ok(v)
}

fn series_at(e: &Entry, text: &str, offset: usize) -> Result<SeriesExpr, WorksheetError> {
    SeriesExpr::parse(text).map_err(|err| WorksheetError::Syntax {
        line: e.line,
        col: e.col + offset + err.col - 1,
        msg: err.msg,
    })
}

fn series(e: &Entry) -> Result<Tagged<SeriesExpr>, WorksheetError> {
    let (v, source) = split_source(e)?;
    let s = series_at(e, &v, 0)?;
    if source.is_none() && !s.expr.is_reference() {
        return Err(WorksheetError::MissingSource {
            line: e.line,
            key: e.key.clone(),
        });
    }
    Ok(Tagged { value: s, source })
}

fn removal(e: &Entry) -> Result<Tagged<Removal>, WorksheetError> {
    let (v, source) = split_source(e)?;
    let Some((c, rest)) = v.split_once(':') else {
        return Err(WorksheetError::Syntax {
            line: e.line,
            col: e.col,
            msg: "removal must read 'codim: series'".into(),
        });
    };
    let codim = c.trim().parse().map_err(|_| WorksheetError::Syntax {
        line: e.line,
        col: e.col,
        msg: format!("invalid codimension {:?}", c.trim()),
    })?;
    let series = series_at(e, rest, c.chars().count() + 1)?;
    if source.is_none() && !series.expr.is_reference() {
        return Err(WorksheetError::MissingSource {
            line: e.line,
            key: e.key.clone(),
        });
    }
    Ok(Tagged {
        value: Removal { codim, series },
        source,
    })
}

fn ref_name(e: &Entry) -> Result<String, WorksheetError> {
    let v = plain(e)?;
    let name = v.strip_prefix('$').unwrap_or(&v).to_string();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(WorksheetError::Syntax {
            line: e.line,
            col: e.col,
            msg: format!("invalid step name {v:?}"),
        });
    }
    Ok(name)
}

fn sum_terms(e: &Entry) -> Result<Vec<(Sign, String)>, WorksheetError> {
    let v = plain(e)?;
    let mut out = Vec::new();
    let mut sign = Sign::Plus;
    let mut expect_name = true;
    for tok in v.split_whitespace().flat_map(|t| {
        // split glued signs such as "a+b"
        let mut parts = Vec::new();
        let mut cur = String::new();
        for ch in t.chars() {
            if ch == '+' || ch == '-' {
                if !cur.is_empty() {
                    parts.push(std::mem::take(&mut cur));
                }
                parts.push(ch.to_string());
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            parts.push(cur);
        }
        parts
    }) {
        match tok.as_str() {
            "+" | "-" => {
                if tok == "-" {
                    sign = if sign == Sign::Plus {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    };
                }
                expect_name = true;
            }
            name => {
                if !expect_name {
                    return Err(WorksheetError::Syntax {
                        line: e.line,
                        col: e.col,
                        msg: format!("expected '+' or '-' before {name:?}"),
                    });
                }
                let name = name.strip_prefix('$').unwrap_or(name);
                out.push((sign, name.to_string()));
                sign = Sign::Plus;
                expect_name = false;
            }
        }
    }
    if out.is_empty() || expect_name {
        return Err(WorksheetError::Syntax {
            line: e.line,
            col: e.col,
            msg: "terms must read 'a + b - c'".into(),
        });
    }
    Ok(out)
}

fn parse_step(sec: &Section, name: &str) -> Result<Step, WorksheetError> {
    let mut b = StepBuilder {
        name,
        entries: sec.entries.iter().collect(),
        used: BTreeSet::new(),
    };
    let kind_entry = b.req("kind")?;
    let kind_name = plain(kind_entry)?;
    let truncation = b
        .opt("truncation")?
        .map(|e| scalar::<usize>(e).map(|t| t.value))
        .transpose()?;
    let kind = match kind_name.as_str() {
        "equivariant_ss" => {
            let n_vars = scalar(b.req("n_vars")?)?;
            let degrees = match (b.opt("degree")?, b.opt("degrees")?) {
                (Some(d), None) => {
                    let t: Tagged<u32> = scalar(d)?;
                    Tagged {
                        value: vec![t.value],
                        source: t.source,
                    }
                }
                (None, Some(ds)) => {
                    let (v, source) = split_source(ds)?;
                    let value = v
                        .split(',')
                        .map(|x| x.trim().parse::<u32>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| WorksheetError::Syntax {
                            line: ds.line,
                            col: ds.col,
                            msg: format!("invalid degree list {v:?}"),
                        })?;
                    Tagged { value, source }
                }
                _ => {
                    return Err(WorksheetError::MissingKey {
                        step: name.to_string(),
                        key: "degree (or degrees)".into(),
                    })
                }
            };
            let codim_mode = b
                .opt("codim_mode")?
                .map(|e| {
                    plain(e)?
                        .parse::<CodimMode>()
                        .map_err(|msg| WorksheetError::Syntax {
                            line: e.line,
                            col: e.col,
                            msg,
                        })
                })
                .transpose()?;
            StepKind::EquivariantSs {
                n_vars,
                degrees,
                codim_mode,
            }
        }
        "blowup_correction" => StepKind::BlowupCorrection {
            d_r: scalar(b.req("d_r")?)?,
            center: series(b.req("center")?)?,
            removals: b
                .all("removal")
                .into_iter()
                .map(removal)
                .collect::<Result<_, _>>()?,
        },
        "sum" => StepKind::Sum {
            terms: sum_terms(b.req("terms")?)?,
        },
        "duality_complete" => StepKind::DualityComplete {
            input: ref_name(b.req("input")?)?,
            complex_dim: scalar(b.req("complex_dim")?)?,
        },
        "ic_blowdown" => StepKind::IcBlowdown {
            base: series(b.req("base")?)?,
            fiber: series(b.req("fiber")?)?,
            fiber_dim: scalar(b.req("fiber_dim")?)?,
        },
        "decomp_pbundle" => {
            let input = ref_name(b.req("input")?)?;
            let de = b.req("direction")?;
            let direction = match plain(de)?.as_str() {
                "forward" => Direction::Forward,
                "inverse" => Direction::Inverse,
                other => {
                    return Err(WorksheetError::Syntax {
                        line: de.line,
                        col: de.col,
                        msg: format!("direction must be forward or inverse, got {other:?}"),
                    })
                }
            };
            StepKind::DecompPbundle {
                input,
                direction,
                z: series(b.req("z")?)?,
                c: scalar(b.req("c")?)?,
                m: scalar(b.req("m")?)?,
            }
        }
        "decomp_semismall" => StepKind::DecompSemismall {
            input: ref_name(b.req("input")?)?,
            z: series(b.req("z")?)?,
            m: scalar(b.req("m")?)?,
            n: scalar(b.req("n")?)?,
        },
        "series_literal" => StepKind::SeriesLiteral {
            value: series(b.req("value")?)?,
        },
        other => {
            return Err(WorksheetError::UnknownKind {
                line: kind_entry.line,
                kind: other.to_string(),
            })
        }
    };
    let expect = b.opt("expect")?.map(series).transpose()?;
    let note = b.opt("note")?.map(plain).transpose()?;
    for (i, e) in sec.entries.iter().enumerate() {
        if !b.used.contains(&i) {
            return Err(WorksheetError::Syntax {
                line: e.line,
                col: 1,
                msg: format!("unknown key {:?} for {kind_name}", e.key),
            });
        }
    }
    Ok(Step {
        name: name.to_string(),
        kind,
        truncation,
        expect,
        note,
    })
}

/// Parses and validates a worksheet.
pub fn parse_worksheet(text: &str) -> Result<Worksheet, WorksheetError> {
    let sections = split_sections(text)?;
    let mut ws = Worksheet {
        title: String::new(),
        truncation: crate::series::DEFAULT_TRUNCATION,
        codim_mode: CodimMode::default(),
        steps: Vec::new(),
    };
    let mut defined: BTreeSet<String> = BTreeSet::new();
    for sec in &sections {
        if sec.header == "worksheet" {
            for e in &sec.entries {
                match e.key.as_str() {
                    "title" => ws.title = plain(e)?,
                    "truncation" => ws.truncation = scalar::<usize>(e)?.value,
                    "codim_mode" => {
                        ws.codim_mode = plain(e)?.parse().map_err(|msg| WorksheetError::Syntax {
                            line: e.line,
                            col: e.col,
                            msg,
                        })?
                    }
                    other => {
                        return Err(WorksheetError::Syntax {
                            line: e.line,
                            col: 1,
                            msg: format!("unknown worksheet key {other:?}"),
                        })
                    }
                }
            }
            continue;
        }
        let Some(name) = sec
            .header
            .strip_prefix("step")
            .filter(|r| r.starts_with(char::is_whitespace))
        else {
            return Err(WorksheetError::Syntax {
                line: sec.line,
                col: 2,
                msg: format!("unknown section [{}]", sec.header),
            });
        };
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(WorksheetError::Syntax {
                line: sec.line,
                col: 2,
                msg: format!("invalid step name {name:?}"),
            });
        }
        if defined.contains(name) {
            return Err(WorksheetError::DuplicateStep {
                line: sec.line,
                name: name.to_string(),
            });
        }
        let step = parse_step(sec, name)?;
        let mut deps = step.kind.dependencies();
        if let Some(e) = &step.expect {
            deps.extend(e.value.expr.refs());
        }
        for d in deps {
            if !defined.contains(&d) {
                return Err(WorksheetError::UnresolvedRef {
                    line: sec.line,
                    step: name.to_string(),
                    name: d,
                });
            }
        }
        defined.insert(name.to_string());
        ws.steps.push(step);
    }
    Ok(ws)
}

fn tagged<T: fmt::Display>(t: &Tagged<T>) -> String {
    match &t.source {
        Some(s) => format!("{} {s}", t.value),
        None => t.value.to_string(),
    }
}

impl fmt::Display for SeriesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl fmt::Display for Removal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.codim, self.series)
    }
}

/// Canonical text of a worksheet; parsing it gives back an equal value.
pub fn serialize_worksheet(ws: &Worksheet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[worksheet]");
    let _ = writeln!(out, "title = {}", ws.title);
    let _ = writeln!(out, "truncation = {}", ws.truncation);
    let _ = writeln!(out, "codim_mode = {}", ws.codim_mode);
    for s in &ws.steps {
        let _ = writeln!(out, "\n[step {}]", s.name);
        let _ = writeln!(out, "kind = {}", s.kind.name());
        if let Some(t) = s.truncation {
            let _ = writeln!(out, "truncation = {t}");
        }
        match &s.kind {
            StepKind::EquivariantSs {
                n_vars,
                degrees,
                codim_mode,
            } => {
                let _ = writeln!(out, "n_vars = {}", tagged(n_vars));
                let ds: Vec<String> = degrees.value.iter().map(u32::to_string).collect();
                let key = if ds.len() == 1 { "degree" } else { "degrees" };
                let t = Tagged {
                    value: ds.join(", "),
                    source: degrees.source.clone(),
                };
                let _ = writeln!(out, "{key} = {}", tagged(&t));
                if let Some(m) = codim_mode {
                    let _ = writeln!(out, "codim_mode = {m}");
                }
            }
            StepKind::BlowupCorrection {
                d_r,
                center,
                removals,
            } => {
                let _ = writeln!(out, "d_r = {}", tagged(d_r));
                let _ = writeln!(out, "center = {}", tagged(center));
                for r in removals {
                    let _ = writeln!(out, "removal = {}", tagged(r));
                }
            }
            StepKind::Sum { terms } => {
                let mut t = String::new();
                for (i, (sign, name)) in terms.iter().enumerate() {
                    match (i, sign) {
                        (0, Sign::Plus) => {}
                        (0, Sign::Minus) => t.push_str("- "),
                        (_, Sign::Plus) => t.push_str(" + "),
                        (_, Sign::Minus) => t.push_str(" - "),
                    }
                    t.push_str(name);
                }
                let _ = writeln!(out, "terms = {t}");
            }
            StepKind::DualityComplete { input, complex_dim } => {
                let _ = writeln!(out, "input = {input}");
                let _ = writeln!(out, "complex_dim = {}", tagged(complex_dim));
            }
            StepKind::IcBlowdown {
                base,
                fiber,
                fiber_dim,
            } => {
                let _ = writeln!(out, "base = {}", tagged(base));
                let _ = writeln!(out, "fiber = {}", tagged(fiber));
                let _ = writeln!(out, "fiber_dim = {}", tagged(fiber_dim));
            }
            StepKind::DecompPbundle {
                input,
                direction,
                z,
                c,
                m,
            } => {
                let d = match direction {
                    Direction::Forward => "forward",
                    Direction::Inverse => "inverse",
                };
                let _ = writeln!(out, "input = {input}");
                let _ = writeln!(out, "direction = {d}");
                let _ = writeln!(out, "z = {}", tagged(z));
                let _ = writeln!(out, "c = {}", tagged(c));
                let _ = writeln!(out, "m = {}", tagged(m));
            }
            StepKind::DecompSemismall { input, z, m, n } => {
                let _ = writeln!(out, "input = {input}");
                let _ = writeln!(out, "z = {}", tagged(z));
                let _ = writeln!(out, "m = {}", tagged(m));
                let _ = writeln!(out, "n = {}", tagged(n));
            }
            StepKind::SeriesLiteral { value } => {
                let _ = writeln!(out, "value = {}", tagged(value));
            }
        }
        if let Some(e) = &s.expect {
            let _ = writeln!(out, "expect = {}", tagged(e));
        }
        if let Some(n) = &s.note {
            let _ = writeln!(out, "note = {n}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI: &str = "[worksheet]\ntitle = mini\ntruncation = 4\n\n[step a]\nkind = series_literal\nvalue = 1/(1-t^2) [TRIVIAL geometric series]\n";

    #[test]
    fn minimal_worksheet() {
        let ws = parse_worksheet(MINI).unwrap();
        assert_eq!(ws.truncation, 4);
        assert_eq!(ws.steps.len(), 1);
        let r = evaluate_worksheet(&ws).unwrap();
        assert_eq!(r.steps[0].series.to_ints().unwrap(), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn unresolved_reference() {
        let text = format!("{MINI}\n[step b]\nkind = sum\nterms = a + nope\n");
        match parse_worksheet(&text) {
            Err(WorksheetError::UnresolvedRef { name, .. }) => assert_eq!(name, "nope"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_source_and_bad_expression() {
        let text = MINI.replace(" [TRIVIAL geometric series]", "");
        assert!(matches!(
            parse_worksheet(&text),
            Err(WorksheetError::MissingSource { line: 7, .. })
        ));
        let text = MINI.replace("1/(1-t^2)", "1/(1-t^2");
        match parse_worksheet(&text) {
            Err(WorksheetError::Syntax { line: 7, col, .. }) => assert_eq!(col, 17),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn citation_needs_quotes() {
        let text = MINI.replace("[TRIVIAL geometric series]", "[PAPER 4.1]");
        assert!(matches!(
            parse_worksheet(&text),
            Err(WorksheetError::Syntax { .. })
        ));
        let text = MINI.replace("[TRIVIAL geometric series]", "[PAPER s2 \"x [y]\"]");
        let ws = parse_worksheet(&text).unwrap();
        let Some(Source::Cited { citation, .. }) = &ws.steps[0].kind_source() else {
            panic!()
        };
        assert_eq!(citation, "x [y]");
    }

    #[test]
    fn round_trip() {
        let ws = parse_worksheet(MINI).unwrap();
        let again = parse_worksheet(&serialize_worksheet(&ws)).unwrap();
        assert_eq!(ws, again);
    }

    #[test]
    fn unknown_kind() {
        let text = MINI.replace("series_literal", "frobnicate");
        assert!(matches!(
            parse_worksheet(&text),
            Err(WorksheetError::UnknownKind { line: 6, .. })
        ));
    }

    impl Step {
        fn kind_source(&self) -> Option<Source> {
            match &self.kind {
                StepKind::SeriesLiteral { value } => value.source.clone(),
                _ => None,
            }
        }
    }
}
