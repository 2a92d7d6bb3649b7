//! Line-oriented transform pipelines and point files.
//!
//! ```text
//! # comment
//! rotate u=(1,0,0) v=(0,1,0) theta=0.5
//! translate v=(1, 2, 3)
//! perspective eye=(0,0,0) n=(0,0,1) c=1
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Error;
use crate::euclid::{EuclidVector, Paravector};
use crate::projective::{paravector_conditions, probe_points};
use crate::transform::{compose, Perspective, Transform};
use crate::versor::{Versor, PRECONDITION_TOL};
use crate::Multivector;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Reflect {
        n: EuclidVector,
    },
    Rotate {
        u: EuclidVector,
        v: EuclidVector,
        theta: f64,
    },
    HRotate {
        u: EuclidVector,
        v: EuclidVector,
        eta: f64,
    },
    Shear {
        u: EuclidVector,
        v: EuclidVector,
        t: f64,
    },
    Scale {
        u: EuclidVector,
        t: f64,
    },
    Translate {
        v: EuclidVector,
    },
    Cotranslate {
        v: EuclidVector,
    },
    Perspective {
        eye: EuclidVector,
        n: EuclidVector,
        c: f64,
    },
    Pseudo {
        n: EuclidVector,
    },
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Reflect { .. } => "reflect",
            Step::Rotate { .. } => "rotate",
            Step::HRotate { .. } => "hrotate",
            Step::Shear { .. } => "shear",
            Step::Scale { .. } => "scale",
            Step::Translate { .. } => "translate",
            Step::Cotranslate { .. } => "cotranslate",
            Step::Perspective { .. } => "perspective",
            Step::Pseudo { .. } => "pseudo",
        }
    }

    pub fn transform(&self) -> crate::Result<Transform> {
        Ok(match *self {
            Step::Reflect { n } => Transform::Sandwich(Versor::reflection(&n)?),
            Step::Rotate { u, v, theta } => Transform::Sandwich(Versor::rotation(&u, &v, theta)?),
            Step::HRotate { u, v, eta } => Transform::Sandwich(Versor::hyperbolic(&u, &v, eta)?),
            Step::Shear { u, v, t } => Transform::Sandwich(Versor::shear(&u, &v, t)?),
            Step::Scale { u, t } => Transform::Sandwich(Versor::scale(&u, t)?),
            Step::Translate { v } => Transform::Sandwich(Versor::translation(&v)),
            Step::Cotranslate { v } => Transform::Cotranslation(v),
            Step::Perspective { eye, n, c } => Transform::Perspective(Perspective::new(eye, n, c)?),
            Step::Pseudo { n } => {
                if (n.norm() - 1.0).abs() > PRECONDITION_TOL {
                    return Err(Error::Domain(format!("view direction {n} is not a unit vector")));
                }
                Transform::Cotranslation(n)
            }
        })
    }

    /// Inverse step, or `None` for the projections.
    pub fn inverse(&self) -> Option<Step> {
        Some(match *self {
            Step::Reflect { n } => Step::Reflect { n },
            Step::Rotate { u, v, theta } => Step::Rotate { u, v, theta: -theta },
            Step::HRotate { u, v, eta } => Step::HRotate { u, v, eta: -eta },
            Step::Shear { u, v, t } => Step::Shear { u, v, t: -t },
            Step::Scale { u, t } => Step::Scale { u, t: -t },
            Step::Translate { v } => Step::Translate { v: -v },
            Step::Cotranslate { v } => Step::Cotranslate { v: -v },
            Step::Perspective { .. } | Step::Pseudo { .. } => return None,
        })
    }
}

fn fmt_vec(v: &EuclidVector) -> String {
    format!("({},{},{})", v[0], v[1], v[2])
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match self {
            Step::Reflect { n } | Step::Pseudo { n } => write!(f, "{name} n={}", fmt_vec(n)),
            Step::Rotate { u, v, theta } => {
                write!(f, "{name} u={} v={} theta={theta}", fmt_vec(u), fmt_vec(v))
            }
            Step::HRotate { u, v, eta } => {
                write!(f, "{name} u={} v={} eta={eta}", fmt_vec(u), fmt_vec(v))
            }
            Step::Shear { u, v, t } => write!(f, "{name} u={} v={} t={t}", fmt_vec(u), fmt_vec(v)),
            Step::Scale { u, t } => write!(f, "{name} u={} t={t}", fmt_vec(u)),
            Step::Translate { v } | Step::Cotranslate { v } => write!(f, "{name} v={}", fmt_vec(v)),
            Step::Perspective { eye, n, c } => {
                write!(f, "{name} eye={} n={} c={c}", fmt_vec(eye), fmt_vec(n))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Pipeline {
    pub steps: Vec<Step>,
}

impl Pipeline {
    /// Stage list with same-form neighbours fused.
    pub fn transform(&self) -> crate::Result<Transform> {
        let stages = self
            .steps
            .iter()
            .map(Step::transform)
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(compose(&stages))
    }

    pub fn inverse(&self) -> Option<Pipeline> {
        let steps = self.steps.iter().rev().map(Step::inverse).collect::<Option<Vec<_>>>()?;
        Some(Pipeline { steps })
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    Semantic(Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "{}:{}: {msg}", self.line, self.column),
            ParseErrorKind::Semantic(e) => write!(f, "{}:{}: {e}", self.line, self.column),
        }
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, col_byte: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.text[..col_byte].chars().count() + 1,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(self.pos, format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !(c.is_ascii_alphanumeric() || c == '_') {
                break;
            }
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, ',' | '(' | ')') {
                break;
            }
            self.pos += c.len_utf8();
        }
        let tok = &self.text[start..self.pos];
        parse_float(tok).ok_or_else(|| self.err(start, format!("invalid number '{tok}'")))
    }

    fn vector(&mut self) -> Result<EuclidVector, ParseError> {
        self.eat('(')?;
        let x = self.number()?;
        self.eat(',')?;
        let y = self.number()?;
        self.eat(',')?;
        let z = self.number()?;
        self.eat(')')?;
        Ok(EuclidVector::new(x, y, z))
    }
}

fn parse_float(tok: &str) -> Option<f64> {
    let starts_ok = tok
        .trim_start_matches(['+', '-'])
        .starts_with(|c: char| c.is_ascii_digit() || c == '.');
    tok.parse::<f64>().ok().filter(|x| starts_ok && x.is_finite())
}

#[derive(Clone, Copy)]
enum Value {
    Vector(EuclidVector),
    Scalar(f64),
}

const KEYS: &[(&str, &[(&str, bool)])] = &[
    ("reflect", &[("n", true)]),
    ("rotate", &[("u", true), ("v", true), ("theta", false)]),
    ("hrotate", &[("u", true), ("v", true), ("eta", false)]),
    ("shear", &[("u", true), ("v", true), ("t", false)]),
    ("scale", &[("u", true), ("t", false)]),
    ("translate", &[("v", true)]),
    ("cotranslate", &[("v", true)]),
    ("perspective", &[("eye", true), ("n", true), ("c", false)]),
    ("pseudo", &[("n", true)]),
];

fn parse_line(cur: &mut Cursor) -> Result<Step, ParseError> {
    cur.skip_ws();
    let op_start = cur.pos;
    let op = cur.word();
    let Some((_, keys)) = KEYS.iter().find(|(name, _)| *name == op) else {
        return Err(cur.err(op_start, format!("unknown operation '{op}'")));
    };
    let mut args: BTreeMap<&str, Value> = BTreeMap::new();
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
        let key_start = cur.pos;
        let key = cur.word();
        let Some(&(key, is_vector)) = keys.iter().find(|(k, _)| *k == key) else {
            return Err(cur.err(key_start, format!("unexpected parameter '{key}' for {op}")));
        };
        if args.contains_key(key) {
            return Err(cur.err(key_start, format!("parameter '{key}' given twice")));
        }
        if cur.peek() != Some('=') {
            return Err(cur.err(cur.pos, "expected '='"));
        }
        cur.pos += 1;
        let value = if is_vector {
            Value::Vector(cur.vector()?)
        } else {
            Value::Scalar(cur.number()?)
        };
        args.insert(key, value);
    }
    if let Some((missing, _)) = keys.iter().find(|(k, _)| !args.contains_key(k)) {
        return Err(cur.err(cur.pos, format!("{op} is missing parameter '{missing}'")));
    }
    let vec = |k: &str| match args[k] {
        Value::Vector(v) => v,
        Value::Scalar(_) => unreachable!(),
    };
    let num = |k: &str| match args[k] {
        Value::Scalar(x) => x,
        Value::Vector(_) => unreachable!(),
    };
    Ok(match op {
        "reflect" => Step::Reflect { n: vec("n") },
        "rotate" => Step::Rotate {
            u: vec("u"),
            v: vec("v"),
            theta: num("theta"),
        },
        "hrotate" => Step::HRotate {
            u: vec("u"),
            v: vec("v"),
            eta: num("eta"),
        },
        "shear" => Step::Shear {
            u: vec("u"),
            v: vec("v"),
            t: num("t"),
        },
        "scale" => Step::Scale {
            u: vec("u"),
            t: num("t"),
        },
        "translate" => Step::Translate { v: vec("v") },
        "cotranslate" => Step::Cotranslate { v: vec("v") },
        "perspective" => Step::Perspective {
            eye: vec("eye"),
            n: vec("n"),
            c: num("c"),
        },
        "pseudo" => Step::Pseudo { n: vec("n") },
        _ => unreachable!(),
    })
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(before, _)| before)
}

/// Parse a pipeline and check every step's preconditions.
pub fn parse_pipeline(text: &str) -> Result<Pipeline, ParseError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor {
            line: i + 1,
            text: body,
            pos: 0,
        };
        let step = parse_line(&mut cur)?;
        if let Err(e) = step.transform() {
            let column = body.len() - body.trim_start().len() + 1;
            return Err(ParseError {
                line: i + 1,
                column,
                kind: ParseErrorKind::Semantic(e),
            });
        }
        steps.push(step);
    }
    Ok(Pipeline { steps })
}

/// One `w x y z` point per line.
pub fn parse_points(text: &str) -> Result<Vec<Paravector>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let mut vals = [0.0; 4];
        let mut n = 0;
        for (col, tok) in body
            .split_whitespace()
            .map(|t| (t.as_ptr() as usize - body.as_ptr() as usize, t))
        {
            let err = |msg: String| ParseError {
                line: i + 1,
                column: body[..col].chars().count() + 1,
                kind: ParseErrorKind::Syntax(msg),
            };
            if n == 4 {
                return Err(err("expected four values 'w x y z'".into()));
            }
            vals[n] = parse_float(tok).ok_or_else(|| err(format!("invalid number '{tok}'")))?;
            n += 1;
        }
        match n {
            0 => continue,
            4 => out.push(Paravector::from_array(vals)),
            _ => {
                return Err(ParseError {
                    line: i + 1,
                    column: body.len() + 1,
                    kind: ParseErrorKind::Syntax("expected four values 'w x y z'".into()),
                })
            }
        }
    }
    Ok(out)
}

fn clean(x: f64) -> f64 {
    x + 0.0
}

/// Shortest round-trip form, switching to exponent notation for very large
/// or very small magnitudes.
fn format_value(x: f64) -> String {
    let x = clean(x);
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_points(points: &[Paravector]) -> String {
    let mut s = String::new();
    for p in points {
        let [w, x, y, z] = p.to_array().map(format_value);
        s.push_str(&format!("{w} {x} {y} {z}\n"));
    }
    s
}

/// Row-major, one row per line, 17 significant digits.
pub fn format_matrix(m: &crate::projective::ProjMatrix) -> String {
    let mut s = String::new();
    for row in &m.0 {
        let cells: Vec<String> = row.iter().map(|&c| format!("{:.16e}", clean(c))).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

/// Preservation check of one sandwich multivector over the probe set.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub label: String,
    /// Name and worst residual of each condition.
    pub entries: Vec<(&'static str, f64)>,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|(_, r)| *r <= self.tolerance)
    }
}

/// Evaluate the preservation conditions of `psi` over the probe set.
pub fn check_versor(label: impl Into<String>, psi: &Multivector) -> CheckReport {
    let names = ["cond.1", "cond.2", "cond.3", "cond.4", "covector", "grade4", "grade5"];
    let mut worst = [0.0f64; 7];
    for p in probe_points() {
        let r = paravector_conditions(psi, &p);
        let vals = [
            r.residuals[0].max_abs(),
            r.residuals[1].max_abs(),
            r.residuals[2].max_abs(),
            r.residuals[3].max_abs(),
            r.covector_residual.max_abs(),
            r.direct4.max_abs(),
            r.direct5.max_abs(),
        ];
        for (w, v) in worst.iter_mut().zip(vals) {
            *w = w.max(v);
        }
    }
    let scale = psi.max_abs().max(1.0);
    CheckReport {
        label: label.into(),
        entries: names.into_iter().zip(worst).collect(),
        tolerance: 1e-12 + 1e-9 * scale * scale,
    }
}

/// Check every sandwich stage of the composed pipeline; Hodge and
/// perspective stages are checked by applying them to the probe points.
pub fn check_pipeline(pipeline: &Pipeline) -> crate::Result<Vec<CheckReport>> {
    check_pipeline_perturbed(pipeline, &Multivector::zero())
}

/// As [`check_pipeline`], with `extra` added to every sandwich multivector.
/// Lets tests confirm that a broken versor is reported.
pub fn check_pipeline_perturbed(pipeline: &Pipeline, extra: &Multivector) -> crate::Result<Vec<CheckReport>> {
    let t = pipeline.transform()?;
    let mut out = Vec::new();
    for (i, stage) in t.stages().into_iter().enumerate() {
        match stage {
            Transform::Sandwich(v) => out.push(check_versor(format!("stage {}: sandwich", i + 1), &(v.u + *extra))),
            other => {
                let mut worst = 0.0f64;
                for p in probe_points() {
                    match other.apply(&Paravector::affine(p)) {
                        Ok(_) => {}
                        Err(Error::NonParavectorResidue { residue } | Error::CovectorResidue { residue }) => {
                            worst = worst.max(residue)
                        }
                        Err(e) => return Err(e),
                    }
                }
                out.push(CheckReport {
                    label: format!("stage {}: {}", i + 1, stage_name(other)),
                    entries: vec![("paravector", worst)],
                    tolerance: 0.0,
                });
            }
        }
    }
    Ok(out)
}

fn stage_name(t: &Transform) -> &'static str {
    match t {
        Transform::Sandwich(_) => "sandwich",
        Transform::Cotranslation(_) | Transform::HodgeSandwich(_) => "hodge sandwich",
        Transform::Perspective(_) => "perspective",
        Transform::Stages(_) => "stages",
    }
}
