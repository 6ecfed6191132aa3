//! Čech complexes of closed covers and Artin–Tate homology at infinity.

mod cech;
mod complex;

pub use cech::{connected_cover, cover_from_graph, ordered_cech, rz_complex, CechCover, CoverCell, InconsistentIncidence, RzTerm};
pub use complex::{AbelianGroup, ChainComplexZ, ShapeError};

use crate::matrix::IntMatrix;
use crate::mumford::{
    incidence_matrix, oriented_matrix, quadratic_matrix_with, realize_matrix, AtomKind, Mode, MotiveExpression,
    MumfordError, Realization,
};
use crate::gwring::ClassifyOptions;
use crate::plumbing::PlumbingGraph;
use crate::smithlift::kernel_cokernel;
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeMap;

/// One Tate-graded piece `⊕ 𝟙(twist)` with free rank and torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPiece {
    pub twist: i64,
    pub free_rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
}

/// `HM₀ … HM₃`, each as a list of nonzero graded pieces in increasing twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyAtInfinity {
    pub hm: [Vec<GradedPiece>; 4],
    /// Indices `i` where `HM_i` has more than one graded piece, so the
    /// extension between them is not determined.
    pub unresolved_extensions: Vec<usize>,
    pub rational: bool,
}

fn collect(pieces: BTreeMap<i64, AbelianGroup>) -> Vec<GradedPiece> {
    pieces
        .into_iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(twist, g)| {
            let mut torsion = g.torsion;
            torsion.sort();
            GradedPiece { twist, free_rank: g.free_rank, torsion }
        })
        .collect()
}

impl HomologyAtInfinity {
    fn from_groups(groups: [BTreeMap<i64, AbelianGroup>; 4]) -> Self {
        let hm = groups.map(collect);
        let unresolved_extensions = (0..4).filter(|&i| hm[i].len() > 1).collect();
        HomologyAtInfinity { hm, unresolved_extensions, rational: false }
    }

    /// Drops torsion.
    pub fn rationalized(&self) -> Self {
        let hm = self.hm.clone().map(|v| {
            v.into_iter()
                .filter(|p| p.free_rank > 0)
                .map(|p| GradedPiece { torsion: vec![], ..p })
                .collect::<Vec<_>>()
        });
        let unresolved_extensions = (0..4).filter(|&i| hm[i].len() > 1).collect();
        HomologyAtInfinity { hm, unresolved_extensions, rational: true }
    }

    /// `Σ_i (−1)^i` free ranks.
    pub fn euler_characteristic(&self) -> i64 {
        (0..4)
            .map(|i| {
                let r: i64 = self.hm[i].iter().map(|p| p.free_rank as i64).sum();
                if i % 2 == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }
}

fn group(free_rank: usize, torsion: Vec<BigInt>) -> AbelianGroup {
    AbelianGroup { free_rank, torsion }
}

pub fn homology_at_infinity(g: &PlumbingGraph, mode: Mode) -> Result<HomologyAtInfinity, MumfordError> {
    homology_at_infinity_with(g, mode, &ClassifyOptions::default())
}

/// Graded pieces of `HM_i` read off the exact sequence built from the
/// incidence map `p: ℤ^{points} → ℤ^{vertices}` and the Mumford matrix `μ`.
///
/// In quadratic mode `μ` is the rank realization of the quadratic matrix.
pub fn homology_at_infinity_with(
    g: &PlumbingGraph,
    mode: Mode,
    opts: &ClassifyOptions,
) -> Result<HomologyAtInfinity, MumfordError> {
    if let Some((e, p)) = g.edges.iter().flat_map(|e| e.points.iter().map(move |p| (e, p))).find(|(_, p)| p.degree != 1) {
        return Err(MumfordError::NonRationalPoint { a: e.a.clone(), b: e.b.clone(), degree: p.degree });
    }
    let mu: IntMatrix = match mode {
        Mode::Oriented => oriented_matrix(g),
        Mode::Quadratic => realize_matrix(&quadratic_matrix_with(g, opts)?, Realization::Rank),
    };
    let p = incidence_matrix(g);
    let pk = kernel_cokernel(&p);
    let pt = kernel_cokernel(&p.transpose());
    let mk = kernel_cokernel(&mu);

    let mut groups: [BTreeMap<i64, AbelianGroup>; 4] = Default::default();
    groups[0].insert(0, group(pk.cokernel_free_rank, pk.torsion.clone()));
    groups[1].insert(0, group(pk.kernel_rank, vec![]));
    groups[1].insert(1, group(mk.cokernel_free_rank, mk.torsion.clone()));
    groups[2].insert(1, group(mk.kernel_rank, vec![]));
    groups[2].insert(2, group(pt.cokernel_free_rank, pt.torsion.clone()));
    groups[3].insert(2, group(pt.kernel_rank, vec![]));
    Ok(HomologyAtInfinity::from_groups(groups))
}

/// Homology of a realized expression: `𝟙(q)[p]` adds `ℤ` and `cone(n)(q)[p]`
/// adds `ℤ/n` to `HM_p` at twist `q`. `None` if a hofib or Artin atom is
/// present or a shift lies outside `[0, 3]`.
pub fn homology_of_expression(e: &MotiveExpression) -> Option<HomologyAtInfinity> {
    let mut groups: [BTreeMap<i64, AbelianGroup>; 4] = Default::default();
    for (a, m) in e.atoms() {
        let i = usize::try_from(a.p).ok().filter(|&i| i < 4)?;
        let slot = groups[i].entry(a.q).or_default();
        match &a.kind {
            AtomKind::Tate => slot.free_rank += m as usize,
            AtomKind::Cone(n) => slot.torsion.extend(std::iter::repeat_n(n.clone(), m as usize)),
            AtomKind::HoFib(_) | AtomKind::Artin(_) => return None,
        }
    }
    Some(HomologyAtInfinity::from_groups(groups))
}
