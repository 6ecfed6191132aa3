//! Mumford matrices of plumbing graphs and the resulting link decompositions.

mod expr;

pub use expr::{Atom, AtomKind, MotiveExpression};

use crate::gwring::{classify_with, trace_form, ClassifyOptions, DiagonalForm, FieldTag, GwClassResult, GwElement, GwError, GwModelTag};
use crate::matrix::{GwMatrix, IntMatrix};
use crate::plumbing::{PlumbingGraph, Point};
use crate::smithlift::{diagonalize_zeps, kernel_cokernel, snf_int, Obstruction, SnfResult};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Oriented,
    Quadratic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Realization {
    /// `ε ↦ 1`
    Rank,
    /// `ε ↦ −1`
    Signature,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MumfordError {
    #[error("vertex `{vertex}` has odd self-intersection {self_intersection}")]
    NotOrientable { vertex: String, self_intersection: i64 },
    #[error("edge {a}–{b} has a point of multiplicity {multiplicity}")]
    NotTransverse { a: String, b: String, multiplicity: u32 },
    #[error("the graph is not a tree")]
    NotTree,
    #[error("edge {a}–{b} has a point of degree {degree} without extension data")]
    MissingExtension { a: String, b: String, degree: u32 },
    #[error("edge {a}–{b} has a point of degree {degree}; the Artin part needs rational points")]
    NonRationalPoint { a: String, b: String, degree: u32 },
    #[error("edge {a}–{b}: {error}")]
    PointClass { a: String, b: String, error: GwError },
    #[error("{obstruction}")]
    Obstruction { obstruction: Box<Obstruction>, oriented_fallback: Box<LinkResult> },
}

impl MumfordError {
    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            MumfordError::NotOrientable { .. } => "NotOrientable",
            MumfordError::NotTransverse { .. } => "NotTransverse",
            MumfordError::NotTree => "NotTree",
            MumfordError::MissingExtension { .. } => "MissingExtension",
            MumfordError::NonRationalPoint { .. } => "NonRationalPoint",
            MumfordError::PointClass { error: GwError::NotInZEpsImage { .. }, .. } => "NotInZEpsImage",
            MumfordError::PointClass { .. } => "PointClass",
            MumfordError::Obstruction { .. } => "Obstruction",
        }
    }
}

/// Diagonal `(D_i, D_i)`, off-diagonal `Σ_λ deg(λ)·mult(λ)`.
pub fn oriented_matrix(g: &PlumbingGraph) -> IntMatrix {
    let n = g.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, v) in g.vertices.iter().enumerate() {
        m[(i, i)] = BigInt::from(v.self_intersection);
    }
    for (e, (i, j)) in g.edges.iter().zip(g.edge_indices()) {
        let w: BigInt = e.points.iter().map(|p| BigInt::from(p.degree) * p.multiplicity).sum();
        let v = &m[(i, j)] + &w;
        m[(i, j)] = v.clone();
        m[(j, i)] = v;
    }
    m
}

fn point_class(p: &Point, base: &FieldTag, opts: &ClassifyOptions) -> Result<Option<GwElement>, GwError> {
    let form = match &p.extension {
        Some(ext) => {
            let mut ext = ext.scaled_unit(p.unit_class.into());
            // characteristic-0 tags: the trace form is computed with rational arithmetic
            if matches!(base, FieldTag::Generic | FieldTag::RealClosed | FieldTag::ComplexClosed) {
                ext.base = FieldTag::Rational;
            }
            let mut form = trace_form(&ext)?;
            form.base = base.clone();
            form
        }
        None if p.degree == 1 && p.unit_class == 1 => return Ok(Some(GwElement::one())),
        None if p.degree == 1 => DiagonalForm::from_ints(base.clone(), &[-1])?,
        None => return Ok(None),
    };
    match classify_with(&form, GwModelTag::ZEps, opts)? {
        GwClassResult::ZEps { value } => Ok(Some(value)),
        _ => unreachable!("ZEps model returns a ZEps class"),
    }
}

/// Checks the hypotheses of the quadratic computation.
pub fn check_quadratic(g: &PlumbingGraph) -> Result<(), MumfordError> {
    if let Some(v) = g.vertices.iter().find(|v| v.self_intersection % 2 != 0) {
        return Err(MumfordError::NotOrientable { vertex: v.id.clone(), self_intersection: v.self_intersection });
    }
    for e in &g.edges {
        if let Some(p) = e.points.iter().find(|p| p.multiplicity != 1) {
            return Err(MumfordError::NotTransverse { a: e.a.clone(), b: e.b.clone(), multiplicity: p.multiplicity });
        }
    }
    if !g.checks().is_tree {
        return Err(MumfordError::NotTree);
    }
    Ok(())
}

pub fn quadratic_matrix(g: &PlumbingGraph) -> Result<GwMatrix, MumfordError> {
    quadratic_matrix_with(g, &ClassifyOptions::default())
}

/// Diagonal `−n_i·h` for `(D_i, D_i) = −2n_i`; off-diagonal the `ℤ_ε` class of
/// `Σ_λ ⟨Tr(u_λ ·)⟩`.
pub fn quadratic_matrix_with(g: &PlumbingGraph, opts: &ClassifyOptions) -> Result<GwMatrix, MumfordError> {
    check_quadratic(g)?;
    let n = g.len();
    let mut m = GwMatrix::zeros(n, n);
    for (i, v) in g.vertices.iter().enumerate() {
        m[(i, i)] = GwElement::h_multiple(v.self_intersection / 2);
    }
    for (e, (i, j)) in g.edges.iter().zip(g.edge_indices()) {
        let mut w = GwElement::zero();
        for p in &e.points {
            let class = point_class(p, &g.base_field, opts)
                .map_err(|error| MumfordError::PointClass { a: e.a.clone(), b: e.b.clone(), error })?
                .ok_or_else(|| MumfordError::MissingExtension { a: e.a.clone(), b: e.b.clone(), degree: p.degree })?;
            w += &class;
        }
        let v = &m[(i, j)] + &w;
        m[(i, j)] = v.clone();
        m[(j, i)] = v;
    }
    Ok(m)
}

/// Vertices × points incidence: the point on edge `{i, j}`, `i < j`, maps to `e_i − e_j`.
pub fn incidence_matrix(g: &PlumbingGraph) -> IntMatrix {
    let mut cols = Vec::new();
    for (e, (a, b)) in g.edges.iter().zip(g.edge_indices()) {
        for _ in &e.points {
            cols.push((a.min(b), a.max(b)));
        }
    }
    let mut m = IntMatrix::zeros(g.len(), cols.len());
    for (c, (i, j)) in cols.into_iter().enumerate() {
        m[(i, c)] = BigInt::one();
        m[(j, c)] = BigInt::from(-1);
    }
    m
}

/// The cofiber `𝒟` of `⊕_λ 𝟙 → ⊕_i 𝟙`.
pub fn artin_part(g: &PlumbingGraph) -> Result<MotiveExpression, MumfordError> {
    for e in &g.edges {
        if let Some(p) = e.points.iter().find(|p| p.degree != 1) {
            return Err(MumfordError::NonRationalPoint { a: e.a.clone(), b: e.b.clone(), degree: p.degree });
        }
    }
    let kc = kernel_cokernel(&incidence_matrix(g));
    let mut d = MotiveExpression::zero();
    d.push(Atom::tate(0, 0), kc.cokernel_free_rank as u64);
    for t in &kc.torsion {
        d.push(Atom::cone(t.clone(), 0, 0), 1);
    }
    d.push(Atom::tate(0, 1), kc.kernel_rank as u64);
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "ring", rename_all = "snake_case")]
pub enum Diagonalization {
    Integer { matrix: IntMatrix, snf: SnfResult<BigInt> },
    ZEps { matrix: GwMatrix, snf: SnfResult<GwElement> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkDecomposition {
    pub mode: Mode,
    pub expression: MotiveExpression,
    pub diagonalization: Diagonalization,
}

/// The link as the fiber of a block map whose off-diagonal blocks `a`, `b`, `b′`
/// are not determined by the graph data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnresolvedLink {
    pub reason: String,
    /// `𝒟`, when all points are rational.
    pub artin_part: Option<MotiveExpression>,
    /// `𝒟^∨(2)[4]`
    pub artin_dual: Option<MotiveExpression>,
    /// `⊕_λ M(κ_λ)`
    pub point_motives: MotiveExpression,
    /// `⊕_i 𝟙(1)[2]`
    pub vertex_column: MotiveExpression,
    pub mumford_matrix: IntMatrix,
    pub unknown_blocks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LinkResult {
    Resolved(LinkDecomposition),
    Unresolved(UnresolvedLink),
}

impl LinkResult {
    pub fn expression(&self) -> Option<&MotiveExpression> {
        match self {
            LinkResult::Resolved(d) => Some(&d.expression),
            LinkResult::Unresolved(_) => None,
        }
    }
}

fn unresolved(g: &PlumbingGraph, reason: &str) -> UnresolvedLink {
    let artin = artin_part(g).ok();
    let mut points = MotiveExpression::zero();
    for p in g.edges.iter().flat_map(|e| &e.points) {
        points.push(Atom::artin(p.degree, 0, 0), 1);
    }
    let mut column = MotiveExpression::zero();
    column.push(Atom::tate(1, 2), g.len() as u64);
    UnresolvedLink {
        reason: reason.to_string(),
        artin_dual: artin.as_ref().map(|d| d.dual_twisted(2, 4)),
        artin_part: artin,
        point_motives: points,
        vertex_column: column,
        mumford_matrix: oriented_matrix(g),
        unknown_blocks: vec!["a".into(), "b".into(), "b'".into()],
    }
}

fn framed(middle: MotiveExpression) -> MotiveExpression {
    MotiveExpression::sum([MotiveExpression::tate(0, 0), middle, MotiveExpression::tate(2, 3)])
}

fn oriented_link(g: &PlumbingGraph) -> LinkResult {
    let c = g.checks();
    if !c.is_tree {
        return LinkResult::Unresolved(unresolved(g, "graph is not a tree"));
    }
    if !c.all_points_rational {
        return LinkResult::Unresolved(unresolved(g, "graph has non-rational intersection points"));
    }
    let matrix = oriented_matrix(g);
    let snf = snf_int(&matrix);
    let mut middle = MotiveExpression::zero();
    for d in snf.diagonal() {
        // hofib(d)(1)[2] ≅ cone(d)(1)[1]; cone(0) splits and cone(±1) vanishes
        middle.push(Atom::cone(d, 1, 1), 1);
    }
    LinkResult::Resolved(LinkDecomposition {
        mode: Mode::Oriented,
        expression: framed(middle),
        diagonalization: Diagonalization::Integer { matrix, snf },
    })
}

pub fn link_decomposition(g: &PlumbingGraph, mode: Mode) -> Result<LinkResult, MumfordError> {
    link_decomposition_with(g, mode, &ClassifyOptions::default())
}

/// `𝟙 ⊕ hofib(μ) ⊕ 𝟙(2)[3]` with `hofib(μ)` read off a diagonalization of `μ`.
pub fn link_decomposition_with(g: &PlumbingGraph, mode: Mode, opts: &ClassifyOptions) -> Result<LinkResult, MumfordError> {
    match mode {
        Mode::Oriented => Ok(oriented_link(g)),
        Mode::Quadratic => {
            let matrix = quadratic_matrix_with(g, opts)?;
            let snf = diagonalize_zeps(&matrix).map_err(|o| MumfordError::Obstruction {
                obstruction: Box::new(o),
                oriented_fallback: Box::new(oriented_link(g)),
            })?;
            let mut middle = MotiveExpression::zero();
            for d in snf.diagonal() {
                middle.push(Atom::hofib(d, 1, 2), 1);
            }
            Ok(LinkResult::Resolved(LinkDecomposition {
                mode,
                expression: framed(middle),
                diagonalization: Diagonalization::ZEps { matrix, snf },
            }))
        }
    }
}

pub fn realize_element(d: &GwElement, target: Realization) -> BigInt {
    match target {
        Realization::Rank => d.plus(),
        Realization::Signature => d.minus(),
    }
}

pub fn realize_matrix(m: &GwMatrix, target: Realization) -> IntMatrix {
    match target {
        Realization::Rank => m.plus_part(),
        Realization::Signature => m.minus_part(),
    }
}

/// `hofib(d)(q)[p] ↦ cone(n)(q)[p−1]` with `n` the realized integer.
pub fn realize_expression(e: &MotiveExpression, target: Realization) -> MotiveExpression {
    let mut out = MotiveExpression::zero();
    for (a, m) in e.atoms() {
        match &a.kind {
            AtomKind::HoFib(d) => {
                let n = realize_element(d, target).abs();
                out.push(Atom::cone(n, a.q, a.p - 1), m);
            }
            _ => out.push(a.clone(), m),
        }
    }
    out
}
