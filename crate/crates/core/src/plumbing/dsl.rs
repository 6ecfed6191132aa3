//! Line-oriented graph DSL.
//!
//! ```text
//! field rational;
//! vertex a -2;
//! vertex b -2;
//! edge a b point deg=1 unit=-1 mult=1;   # zero point clauses: one default point
//! ```
//!
//! Points of degree > 1 may carry `poly=c0,c1,…` (monic minimal polynomial,
//! low degree first) and `upoly=…` (the unit as a polynomial in the root).

use super::{Curve, Intersection, PlumbingGraph, Point, ValidationError};
use crate::gwring::{ExtensionSpec, FieldTag};
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid graph: {0}")]
    Validation(#[from] ValidationError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Semi,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut word = String::new();
        let mut start = 0;
        for (ci, ch) in line.chars().enumerate() {
            if ch.is_whitespace() || ch == ';' {
                if !word.is_empty() {
                    out.push(Token { tok: Tok::Word(std::mem::take(&mut word)), line: li + 1, column: start + 1 });
                }
                if ch == ';' {
                    out.push(Token { tok: Tok::Semi, line: li + 1, column: ci + 1 });
                }
            } else {
                if word.is_empty() {
                    start = ci;
                }
                word.push(ch);
            }
        }
        if !word.is_empty() {
            out.push(Token { tok: Tok::Word(word), line: li + 1, column: start + 1 });
        }
    }
    out
}

fn err(t: &Token, message: impl Into<String>) -> ParseError {
    ParseError { line: t.line, column: t.column, message: message.into() }
}

fn word(t: &Token) -> &str {
    match &t.tok {
        Tok::Word(w) => w,
        Tok::Semi => ";",
    }
}

fn parse_int<T: std::str::FromStr>(t: &Token, s: &str, what: &str) -> Result<T, ParseError> {
    let s = s.strip_prefix('+').unwrap_or(s);
    s.parse().map_err(|_| err(t, format!("expected {what}, found `{s}`")))
}

fn parse_coeffs(t: &Token, s: &str) -> Result<Vec<BigInt>, ParseError> {
    s.split(',')
        .map(|c| {
            let c = c.trim();
            c.strip_prefix('+').unwrap_or(c).parse::<BigInt>().map_err(|_| err(t, format!("bad coefficient `{c}`")))
        })
        .collect()
}

struct PointDraft {
    point: Point,
    poly: Option<Vec<BigInt>>,
    upoly: Option<Vec<BigInt>>,
}

fn parse_edge(stmt: &[Token]) -> Result<(Intersection, Vec<PointDraft>), ParseError> {
    if stmt.len() < 3 {
        return Err(err(&stmt[0], "edge needs two vertex ids"));
    }
    let a = word(&stmt[1]).to_string();
    let b = word(&stmt[2]).to_string();
    let mut drafts: Vec<PointDraft> = Vec::new();
    for t in &stmt[3..] {
        let w = word(t);
        if w == "point" {
            drafts.push(PointDraft { point: Point::default(), poly: None, upoly: None });
            continue;
        }
        let Some((key, value)) = w.split_once('=') else {
            return Err(err(t, format!("expected `point` or key=value, found `{w}`")));
        };
        let Some(d) = drafts.last_mut() else {
            return Err(err(t, "point attribute before any `point` keyword"));
        };
        match key {
            "deg" => d.point.degree = parse_int(t, value, "a degree")?,
            "mult" => d.point.multiplicity = parse_int(t, value, "a multiplicity")?,
            "unit" => {
                d.point.unit_class = match value {
                    "+1" | "1" | "+" => 1,
                    "-1" | "-" => -1,
                    _ => return Err(err(t, format!("unit must be +1 or -1, found `{value}`"))),
                }
            }
            "poly" => d.poly = Some(parse_coeffs(t, value)?),
            "upoly" => d.upoly = Some(parse_coeffs(t, value)?),
            _ => return Err(err(t, format!("unknown point attribute `{key}`"))),
        }
    }
    if drafts.is_empty() {
        drafts.push(PointDraft { point: Point::default(), poly: None, upoly: None });
    }
    if drafts.iter().any(|d| d.upoly.is_some() && d.poly.is_none()) {
        return Err(err(&stmt[0], "`upoly` given without `poly`"));
    }
    Ok((Intersection { a, b, points: Vec::new() }, drafts))
}

fn parse_field(stmt: &[Token]) -> Result<FieldTag, ParseError> {
    let kind = stmt.get(1).ok_or_else(|| err(&stmt[0], "field needs a kind"))?;
    let expect_len = |n: usize| {
        if stmt.len() > n {
            Err(err(&stmt[n], "unexpected token"))
        } else {
            Ok(())
        }
    };
    let tag = match word(kind) {
        "rational" => FieldTag::Rational,
        "real" => FieldTag::RealClosed,
        "complex" => FieldTag::ComplexClosed,
        "generic" => FieldTag::Generic,
        "finite" => {
            let pt = stmt.get(2).ok_or_else(|| err(kind, "finite field needs a characteristic"))?;
            let p: u64 = parse_int(pt, word(pt), "a prime")?;
            if !crate::gwring::is_prime_u64(p) {
                return Err(err(pt, format!("{p} is not prime")));
            }
            let e = match stmt.get(3) {
                Some(et) => parse_int::<u32>(et, word(et), "an exponent")?,
                None => 1,
            };
            if e == 0 {
                return Err(err(&stmt[3], "exponent must be positive"));
            }
            expect_len(4)?;
            return Ok(FieldTag::FiniteField { p, e });
        }
        other => return Err(err(kind, format!("unknown field kind `{other}`"))),
    };
    expect_len(2)?;
    Ok(tag)
}

/// Parses and validates a graph.
pub fn parse_graph(text: &str) -> Result<PlumbingGraph, GraphError> {
    let tokens = tokenize(text);
    let mut statements: Vec<Vec<Token>> = vec![Vec::new()];
    for t in tokens {
        if t.tok == Tok::Semi {
            statements.push(Vec::new());
        } else {
            statements.last_mut().expect("nonempty").push(t);
        }
    }
    let mut vertices = Vec::new();
    let mut edges: Vec<(Intersection, Vec<PointDraft>)> = Vec::new();
    let mut field: Option<FieldTag> = None;
    for stmt in statements.iter().filter(|s| !s.is_empty()) {
        let head = &stmt[0];
        match word(head) {
            "vertex" => {
                if stmt.len() != 3 {
                    return Err(err(head, "expected `vertex <id> <self_intersection>`").into());
                }
                let self_intersection = parse_int(&stmt[2], word(&stmt[2]), "an integer self-intersection")?;
                vertices.push(Curve { id: word(&stmt[1]).to_string(), self_intersection });
            }
            "edge" => edges.push(parse_edge(stmt)?),
            "field" => {
                if field.is_some() {
                    return Err(err(head, "field declared twice").into());
                }
                field = Some(parse_field(stmt)?);
            }
            other => return Err(err(head, format!("unknown statement `{other}`")).into()),
        }
    }
    let base_field = field.unwrap_or_default();
    let edges = edges
        .into_iter()
        .map(|(mut e, drafts)| {
            e.points = drafts
                .into_iter()
                .map(|d| {
                    let mut p = d.point;
                    if let Some(poly) = d.poly {
                        p.extension = Some(ExtensionSpec {
                            base: base_field.clone(),
                            minimal_polynomial: poly,
                            unit: d.upoly.unwrap_or_else(|| vec![BigInt::from(1)]),
                        });
                    }
                    p
                })
                .collect();
            e
        })
        .collect();
    Ok(PlumbingGraph::new(vertices, edges, base_field)?)
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Inverse of [`parse_graph`] on valid graphs.
pub fn serialize_graph(g: &PlumbingGraph) -> String {
    let mut out = String::new();
    writeln!(out, "field {};", g.base_field).unwrap();
    for v in &g.vertices {
        writeln!(out, "vertex {} {};", v.id, v.self_intersection).unwrap();
    }
    for e in &g.edges {
        write!(out, "edge {} {}", e.a, e.b).unwrap();
        if !(e.points.len() == 1 && e.points[0].is_default()) {
            for p in &e.points {
                let unit = if p.unit_class < 0 { "-1" } else { "+1" };
                write!(out, " point deg={} unit={} mult={}", p.degree, unit, p.multiplicity).unwrap();
                if let Some(ext) = &p.extension {
                    write!(out, " poly={} upoly={}", join(&ext.minimal_polynomial), join(&ext.unit)).unwrap();
                }
            }
        }
        out.push_str(";\n");
    }
    out
}
