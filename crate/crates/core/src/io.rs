//! JSON text formats for molecules, step functions and point lists.
//!
//! Numbers may be written as JSON numbers or as strings (`"3"`, `"-1/3"`,
//! `"2.5e-1"`); strings keep rationals exact.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::free_norm::NormCertificate;
use crate::linear::LinearMap;
use crate::molecule::Molecule;
use crate::real_line::StepFunction;
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::space::{NormKind, Point, Space};

/// A validated numeric literal, kept as text until the scalar type is known.
struct Literal(String);

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Literal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a numeric string such as \"-3/4\"")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Literal, E> {
                match parse_rational(s) {
                    Some(_) => Ok(Literal(s.trim().to_string())),
                    None => Err(E::custom(format!("invalid number {s:?}"))),
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Literal, E> {
                Ok(Literal(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Literal, E> {
                Ok(Literal(v.to_string()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Literal, E> {
                if v.is_finite() {
                    Ok(Literal(format!("{v:e}")))
                } else {
                    Err(E::custom("non-finite number"))
                }
            }
        }
        d.deserialize_any(V)
    }
}

impl Literal {
    fn value<S: Scalar>(&self) -> S {
        S::parse(&self.0).expect("validated during deserialization")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    dim: usize,
    norm: NormKind,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    a: Literal,
    x: Vec<Literal>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMolecule {
    space: RawSpace,
    terms: Vec<RawTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    breaks: Vec<Literal>,
    values: Vec<Literal>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format {
        line: e.line(),
        column: e.column(),
        msg: e
            .to_string()
            .split(" at line ")
            .next()
            .unwrap_or_default()
            .to_string(),
    })
}

/// Reads `{"space": {"dim", "norm"}, "terms": [{"a", "x"}]}`. The result is
/// left as written; call [`Molecule::canonicalize`] to merge terms.
pub fn parse_molecule<S: Scalar>(text: &str) -> Result<Molecule<S>> {
    let raw: RawMolecule = from_json(text)?;
    let space = Space::new(raw.space.dim, raw.space.norm)?;
    let terms = raw
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if t.x.len() != space.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "term {i} has {} coordinates, space has dimension {}",
                    t.x.len(),
                    space.dim()
                )));
            }
            Ok((
                t.a.value(),
                Point::new(t.x.iter().map(Literal::value).collect()),
            ))
        })
        .collect::<Result<_>>()?;
    Molecule::new(space, terms)
}

pub fn point_json<S: Scalar>(p: &Point<S>) -> Value {
    Value::Array(p.iter().map(|c| Value::String(c.render())).collect())
}

pub fn space_json(space: &Space) -> Value {
    json!({ "dim": space.dim(), "norm": space.norm_kind().name() })
}

/// The inverse of [`parse_molecule`], with every number as a string.
pub fn molecule_json<S: Scalar>(m: &Molecule<S>) -> Value {
    let terms: Vec<Value> = m
        .terms()
        .iter()
        .map(|t| json!({ "a": t.coeff.render(), "x": point_json(&t.point) }))
        .collect();
    json!({ "space": space_json(m.space()), "terms": terms })
}

pub fn certificate_json<S: Scalar>(c: &NormCertificate<S>) -> Value {
    let potential: Vec<Value> = c
        .potential
        .iter()
        .map(|(p, v)| json!({ "x": point_json(p), "f": v.render() }))
        .collect();
    let flow: Vec<Value> = c
        .flow
        .iter()
        .map(|e| json!({ "from": point_json(&e.from), "to": point_json(&e.to), "amount": e.amount.render() }))
        .collect();
    json!({ "value": c.value.render(), "potential": potential, "flow": flow })
}

pub fn linear_map_json<S: Scalar>(t: &LinearMap<S>) -> Value {
    Value::Array(
        t.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|v| Value::String(v.render())).collect()))
            .collect(),
    )
}

/// Reads `{"breaks": [...], "values": [...]}`.
pub fn parse_step_function(text: &str) -> Result<StepFunction> {
    let raw: RawStep = from_json(text)?;
    StepFunction::new(
        raw.breaks.iter().map(Literal::value::<Rational>).collect(),
        raw.values.iter().map(Literal::value::<Rational>).collect(),
    )
}

pub fn step_function_json(s: &StepFunction) -> Value {
    let render = |v: &[Rational]| {
        v.iter()
            .map(|r| Value::String(r.render()))
            .collect::<Vec<_>>()
    };
    json!({ "breaks": render(s.breaks()), "values": render(s.values()) })
}

/// Reads points separated by `;`, coordinates by `,`, optionally wrapped in
/// parentheses: `"-1; 0; (1, 2)"`.
pub fn parse_points<S: Scalar>(text: &str, dim: usize) -> Result<Vec<Point<S>>> {
    let mut offset = 0;
    let mut points = Vec::new();
    for chunk in text.split(';') {
        let body = chunk.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            offset += chunk.len() + 1;
            continue;
        }
        let coords = body
            .split(',')
            .map(|c| {
                S::parse(c).ok_or_else(|| Error::Format {
                    line: 1,
                    column: offset + chunk.find(c.trim()).unwrap_or(0) + 1,
                    msg: format!("invalid coordinate {:?}", c.trim()),
                })
            })
            .collect::<Result<Vec<S>>>()?;
        if coords.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "point {:?} has {} coordinates, expected {dim}",
                chunk.trim(),
                coords.len()
            )));
        }
        points.push(Point::new(coords));
        offset += chunk.len() + 1;
    }
    Ok(points)
}
