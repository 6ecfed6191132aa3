use super::{Curve, Intersection, PlumbingGraph, Point};
use crate::gwring::FieldTag;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DynkinKind {
    A,
    D,
    E,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalogError {
    #[error("invalid parameter: {message}")]
    InvalidParameter { message: String },
    #[error("unknown catalog entry `{name}`")]
    UnknownName { name: String },
}

fn invalid(message: impl Into<String>) -> CatalogError {
    CatalogError::InvalidParameter { message: message.into() }
}

fn curve(id: impl Into<String>, self_intersection: i64) -> Curve {
    Curve { id: id.into(), self_intersection }
}

fn edge(a: &str, b: &str, points: Vec<Point>) -> Intersection {
    Intersection { a: a.into(), b: b.into(), points }
}

fn simple(a: &str, b: &str) -> Intersection {
    edge(a, b, vec![Point::default()])
}

/// Dynkin graphs with `(−2)`-vertices `e1 … en`.
///
/// `A`: path. `D`: path `e1 … e(n−1)` with `en` attached to `e2`.
/// `E`: path `e1 … e(n−1)` with `en` attached to `e3`.
pub fn dynkin(kind: DynkinKind, n: usize) -> Result<PlumbingGraph, CatalogError> {
    let (path_len, branch) = match kind {
        DynkinKind::A if n >= 1 => (n, None),
        DynkinKind::D if n >= 4 => (n - 1, Some(2)),
        DynkinKind::E if (6..=8).contains(&n) => (n - 1, Some(3)),
        DynkinKind::A => return Err(invalid("A_n needs n ≥ 1")),
        DynkinKind::D => return Err(invalid("D_n needs n ≥ 4")),
        DynkinKind::E => return Err(invalid("E_n needs n ∈ {6, 7, 8}")),
    };
    let ids: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    let vertices = ids.iter().map(|id| curve(id.as_str(), -2)).collect();
    let mut edges: Vec<Intersection> = (1..path_len).map(|i| simple(&ids[i - 1], &ids[i])).collect();
    if let Some(b) = branch {
        edges.push(simple(&ids[b - 1], &ids[n - 1]));
    }
    Ok(PlumbingGraph { vertices, edges, base_field: FieldTag::Generic })
}

/// The boundary fork of the Danielewski surface `D_n`, `2n + 1` vertices in the
/// order `F_inf, C_inf, F_0, E_1_0 … E_(n−1)_0, E_1_1 … E_(n−1)_1`.
pub fn danielewski(n: usize) -> Result<PlumbingGraph, CatalogError> {
    if n == 0 {
        return Err(invalid("danielewski(n) needs n ≥ 1"));
    }
    let mut vertices = vec![curve("F_inf", 0), curve("C_inf", 0), curve("F_0", -2)];
    let mut edges = vec![simple("F_inf", "C_inf"), simple("C_inf", "F_0")];
    for branch in 0..2 {
        let mut prev = "F_0".to_string();
        for i in 1..n {
            let id = format!("E_{i}_{branch}");
            vertices.push(curve(id.as_str(), -2));
            edges.push(simple(&prev, &id));
            prev = id;
        }
    }
    Ok(PlumbingGraph { vertices, edges, base_field: FieldTag::Generic })
}

/// Boundary of the Ramanujam surface: `Q² = 4`, `C² = 3`, `E² = −1`, with `Q`
/// meeting `C` in one point of multiplicity 5 and `E` in one of multiplicity 2.
pub fn ramanujam() -> PlumbingGraph {
    PlumbingGraph {
        vertices: vec![curve("Q", 4), curve("C", 3), curve("E", -1)],
        edges: vec![
            edge("Q", "C", vec![Point::with_multiplicity(5)]),
            edge("Q", "E", vec![Point::with_multiplicity(2)]),
        ],
        base_field: FieldTag::Generic,
    }
}

/// Resolves `dynkin:A5`, `dynkin:D4`, `dynkin:E8`, `danielewski:3`, `ramanujam`.
pub fn catalog(name: &str) -> Result<PlumbingGraph, CatalogError> {
    let unknown = || CatalogError::UnknownName { name: name.to_string() };
    if name == "ramanujam" {
        return Ok(ramanujam());
    }
    if let Some(rest) = name.strip_prefix("dynkin:") {
        let kind = match rest.chars().next() {
            Some('A') => DynkinKind::A,
            Some('D') => DynkinKind::D,
            Some('E') => DynkinKind::E,
            _ => return Err(unknown()),
        };
        let n: usize = rest[1..].parse().map_err(|_| unknown())?;
        return dynkin(kind, n);
    }
    if let Some(rest) = name.strip_prefix("danielewski:") {
        let n: usize = rest.parse().map_err(|_| unknown())?;
        return danielewski(n);
    }
    Err(unknown())
}

/// Name patterns accepted by [`catalog`].
pub fn catalog_names() -> &'static [&'static str] {
    &["dynkin:A<n>", "dynkin:D<n>", "dynkin:E6", "dynkin:E7", "dynkin:E8", "danielewski:<n>", "ramanujam"]
}
