//! Weighted dual graphs of rational-curve configurations.

mod catalog;
mod dsl;

pub use catalog::{catalog, catalog_names, danielewski, dynkin, ramanujam, CatalogError, DynkinKind};
pub use dsl::{parse_graph, serialize_graph, GraphError, ParseError};

use crate::gwring::{ExtensionSpec, FieldTag};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub id: String,
    pub self_intersection: i64,
}

/// One closed intersection point of two curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    #[serde(default = "one_u32")]
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
    #[serde(default = "one_i8")]
    pub unit_class: i8,
    #[serde(default = "one_u32")]
    pub multiplicity: u32,
}

fn one_u32() -> u32 {
    1
}

fn one_i8() -> i8 {
    1
}

impl Default for Point {
    fn default() -> Self {
        Point { degree: 1, extension: None, unit_class: 1, multiplicity: 1 }
    }
}

impl Point {
    pub fn with_multiplicity(multiplicity: u32) -> Self {
        Point { multiplicity, ..Point::default() }
    }

    pub fn is_default(&self) -> bool {
        *self == Point::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intersection {
    pub a: String,
    pub b: String,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlumbingGraph {
    pub vertices: Vec<Curve>,
    pub edges: Vec<Intersection>,
    #[serde(default)]
    pub base_field: FieldTag,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationError {
    #[error("duplicate vertex id `{id}`")]
    DuplicateId { id: String },
    #[error("edge references undeclared vertex `{id}`")]
    DanglingEdge { id: String },
    #[error("self-loop on vertex `{id}`")]
    SelfLoop { id: String },
    #[error("edge {a}–{b}: {message}")]
    InvalidPoint { a: String, b: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphChecks {
    pub is_tree: bool,
    pub is_orientable: bool,
    pub is_transverse: bool,
    pub all_points_rational: bool,
}

impl PlumbingGraph {
    pub fn new(vertices: Vec<Curve>, edges: Vec<Intersection>, base_field: FieldTag) -> Result<Self, ValidationError> {
        let g = PlumbingGraph { vertices, edges, base_field };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id.as_str()) {
                return Err(ValidationError::DuplicateId { id: v.id.clone() });
            }
        }
        for e in &self.edges {
            for id in [&e.a, &e.b] {
                if !seen.contains(id.as_str()) {
                    return Err(ValidationError::DanglingEdge { id: id.clone() });
                }
            }
            if e.a == e.b {
                return Err(ValidationError::SelfLoop { id: e.a.clone() });
            }
            let bad = |message: String| ValidationError::InvalidPoint { a: e.a.clone(), b: e.b.clone(), message };
            if e.points.is_empty() {
                return Err(bad("an edge needs at least one point".into()));
            }
            for p in &e.points {
                if p.degree == 0 {
                    return Err(bad("point degree must be positive".into()));
                }
                if p.multiplicity == 0 {
                    return Err(bad("point multiplicity must be positive".into()));
                }
                if p.unit_class != 1 && p.unit_class != -1 {
                    return Err(bad(format!("unit class must be +1 or -1, got {}", p.unit_class)));
                }
                if let Some(ext) = &p.extension {
                    if ext.degree() != p.degree as usize {
                        return Err(bad(format!(
                            "point degree {} does not match extension degree {}",
                            p.degree,
                            ext.degree()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Edges as vertex index pairs, in input order.
    pub fn edge_indices(&self) -> Vec<(usize, usize)> {
        let pos: HashMap<&str, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        self.edges.iter().map(|e| (pos[e.a.as_str()], pos[e.b.as_str()])).collect()
    }

    pub fn point_count(&self) -> usize {
        self.edges.iter().map(|e| e.points.len()).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for (a, b) in self.edge_indices() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn checks(&self) -> GraphChecks {
        let points = || self.edges.iter().flat_map(|e| &e.points);
        GraphChecks {
            is_tree: self.is_connected() && self.point_count() + 1 == self.len(),
            is_orientable: self.vertices.iter().all(|v| v.self_intersection % 2 == 0),
            is_transverse: points().all(|p| p.multiplicity == 1),
            all_points_rational: points().all(|p| p.degree == 1),
        }
    }
}

pub fn checks(g: &PlumbingGraph) -> GraphChecks {
    g.checks()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(id: &str, s: i64) -> Curve {
        Curve { id: id.into(), self_intersection: s }
    }

    fn edge(a: &str, b: &str) -> Intersection {
        Intersection { a: a.into(), b: b.into(), points: vec![Point::default()] }
    }

    #[test]
    fn validation_errors() {
        let dup = PlumbingGraph::new(vec![curve("a", -2), curve("a", -2)], vec![], FieldTag::Generic);
        assert!(matches!(dup, Err(ValidationError::DuplicateId { .. })));
        let dangling = PlumbingGraph::new(vec![curve("a", -2)], vec![edge("a", "b")], FieldTag::Generic);
        assert!(matches!(dangling, Err(ValidationError::DanglingEdge { .. })));
        let lp = PlumbingGraph::new(vec![curve("a", -2)], vec![edge("a", "a")], FieldTag::Generic);
        assert!(matches!(lp, Err(ValidationError::SelfLoop { .. })));
    }

    #[test]
    fn triangle_is_not_a_tree() {
        let g = PlumbingGraph::new(
            vec![curve("a", -2), curve("b", -2), curve("c", -2)],
            vec![edge("a", "b"), edge("b", "c"), edge("c", "a")],
            FieldTag::Generic,
        )
        .unwrap();
        let c = g.checks();
        assert!(!c.is_tree);
        assert!(c.is_orientable && c.is_transverse && c.all_points_rational);
    }

    #[test]
    fn double_point_is_a_cycle() {
        let mut e = edge("a", "b");
        e.points.push(Point::default());
        let g = PlumbingGraph::new(vec![curve("a", -2), curve("b", -1)], vec![e], FieldTag::Generic).unwrap();
        let c = g.checks();
        assert!(!c.is_tree);
        assert!(!c.is_orientable);
    }

    #[test]
    fn json_defaults() {
        let g: PlumbingGraph = serde_json::from_str(
            r#"{"vertices":[{"id":"a","self_intersection":-2},{"id":"b","self_intersection":-2}],
                "edges":[{"a":"a","b":"b","points":[{}]}]}"#,
        )
        .unwrap();
        assert_eq!(g.base_field, FieldTag::Generic);
        assert_eq!(g.edges[0].points[0], Point::default());
        let back: PlumbingGraph = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
