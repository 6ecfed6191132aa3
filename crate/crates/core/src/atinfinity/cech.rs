//! Ordered Čech complexes of closed covers and their Rapoport–Zink shape.

use super::complex::ChainComplexZ;
use crate::matrix::IntMatrix;
use crate::plumbing::PlumbingGraph;
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// A nonempty intersection `X_J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCell {
    /// Strictly increasing member indices.
    pub subset: Vec<usize>,
    pub components: usize,
    /// `faces[k][c]`: the component of `X_{J∖J[k]}` containing component `c`
    /// of `X_J`. May be omitted when every face is connected.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<Vec<usize>>,
}

/// Members `0 … members−1` and the list of all nonempty intersections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechCover {
    pub members: usize,
    pub cells: Vec<CoverCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("inconsistent incidence: {message}")]
pub struct InconsistentIncidence {
    pub message: String,
}

fn bad(message: impl Into<String>) -> InconsistentIncidence {
    InconsistentIncidence { message: message.into() }
}

fn face(j: &[usize], k: usize) -> Vec<usize> {
    let mut f = j.to_vec();
    f.remove(k);
    f
}

/// Cells indexed by subset, validated.
fn index_cells(cover: &CechCover) -> Result<BTreeMap<Vec<usize>, &CoverCell>, InconsistentIncidence> {
    let mut cells = BTreeMap::new();
    for c in &cover.cells {
        if c.subset.is_empty() {
            return Err(bad("empty index set"));
        }
        if c.subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad(format!("subset {:?} is not strictly increasing", c.subset)));
        }
        if c.subset.iter().any(|&i| i >= cover.members) {
            return Err(bad(format!("subset {:?} names a member ≥ {}", c.subset, cover.members)));
        }
        if c.components == 0 {
            return Err(bad(format!("subset {:?} lists zero components; omit empty intersections", c.subset)));
        }
        if cells.insert(c.subset.clone(), c).is_some() {
            return Err(bad(format!("subset {:?} listed twice", c.subset)));
        }
    }
    for (j, c) in &cells {
        if j.len() < 2 {
            continue;
        }
        if !c.faces.is_empty() && c.faces.len() != j.len() {
            return Err(bad(format!("subset {j:?}: expected {} face maps, found {}", j.len(), c.faces.len())));
        }
        for k in 0..j.len() {
            let f = face(j, k);
            let target = cells
                .get(&f)
                .ok_or_else(|| bad(format!("{j:?} is nonempty but its face {f:?} is not")))?;
            match c.faces.get(k) {
                Some(map) => {
                    if map.len() != c.components || map.iter().any(|&t| t >= target.components) {
                        return Err(bad(format!("face map {k} of {j:?} does not match the component counts")));
                    }
                }
                None if target.components == 1 => {}
                None => return Err(bad(format!("face {f:?} of {j:?} has several components; a face map is required"))),
            }
        }
    }
    Ok(cells)
}

/// Basis of each degree: `(subset, component)` in lexicographic subset order.
fn bases(cells: &BTreeMap<Vec<usize>, &CoverCell>) -> Vec<Vec<(Vec<usize>, usize)>> {
    let top = cells.keys().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![Vec::new(); top];
    for (j, c) in cells {
        for comp in 0..c.components {
            out[j.len() - 1].push((j.clone(), comp));
        }
    }
    out
}

/// Degree `n` is `⊕_{|J| = n+1} ℤ^{π₀(X_J)}`; the differential sends a component
/// of `X_J` to `Σ_k (−1)^k` times the component of `X_{J∖J[k]}` containing it.
pub fn ordered_cech(cover: &CechCover) -> Result<ChainComplexZ, InconsistentIncidence> {
    let cells = index_cells(cover)?;
    let bases = bases(&cells);
    let position: Vec<BTreeMap<(Vec<usize>, usize), usize>> =
        bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, key)| (key, i)).collect()).collect();
    let mut diffs = Vec::new();
    for n in 0..bases.len().saturating_sub(1) {
        let mut d = IntMatrix::zeros(bases[n].len(), bases[n + 1].len());
        for (col, (j, comp)) in bases[n + 1].iter().enumerate() {
            let cell = cells[j];
            for k in 0..j.len() {
                let target = cell.faces.get(k).map_or(0, |m| m[*comp]);
                let row = position[n][&(face(j, k), target)];
                let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let v = &d[(row, col)] + &sign;
                d[(row, col)] = v;
            }
        }
        diffs.push(d);
    }
    let ranks = bases.iter().map(Vec::len).collect();
    Ok(ChainComplexZ::new(ranks, diffs).expect("shapes are built from the ranks"))
}

/// Cover of `D = ∪ D_i` by its components: double intersections are the
/// intersection points, no triple points.
pub fn cover_from_graph(g: &PlumbingGraph) -> CechCover {
    let mut cells: Vec<CoverCell> =
        (0..g.len()).map(|i| CoverCell { subset: vec![i], components: 1, faces: vec![] }).collect();
    let mut pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (e, (a, b)) in g.edges.iter().zip(g.edge_indices()) {
        *pairs.entry((a.min(b), a.max(b))).or_insert(0) += e.points.len();
    }
    for ((a, b), n) in pairs {
        cells.push(CoverCell { subset: vec![a, b], components: n, faces: vec![] });
    }
    CechCover { members: g.len(), cells }
}

/// One term `⊕ 𝟙_{D_J}(c)[2c]` over `|J| = c`, or `𝟙_D` in degree 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RzTerm {
    pub degree: usize,
    pub twist: i64,
    pub shift: i64,
    pub rank: usize,
    /// To the term of degree `degree − 1`; empty in degree 0.
    pub differential: IntMatrix,
}

/// `… → ⊕_{|J|=2} 𝟙_{D_J}(2)[4] → ⊕_i 𝟙_{D_i}(1)[2] → 𝟙_D`, as integer shadows.
pub fn rz_complex(cover: &CechCover) -> Result<Vec<RzTerm>, InconsistentIncidence> {
    let cech = ordered_cech(cover)?;
    let mut terms = vec![RzTerm { degree: 0, twist: 0, shift: 0, rank: 1, differential: IntMatrix::zeros(0, 1) }];
    for (n, &rank) in cech.ranks().iter().enumerate() {
        let c = n + 1;
        let differential = if n == 0 {
            IntMatrix::from_vec(1, rank, vec![BigInt::one(); rank])
        } else {
            cech.differentials()[n - 1].clone()
        };
        terms.push(RzTerm { degree: c, twist: c as i64, shift: 2 * c as i64, rank, differential });
    }
    Ok(terms)
}

/// A cover whose listed intersections are all connected.
pub fn connected_cover(members: usize, cells: &BTreeSet<Vec<usize>>) -> CechCover {
    CechCover {
        members,
        cells: cells.iter().map(|s| CoverCell { subset: s.clone(), components: 1, faces: vec![] }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atinfinity::AbelianGroup;
    use crate::plumbing::{dynkin, DynkinKind};

    fn cover(members: usize, sets: &[&[usize]]) -> CechCover {
        connected_cover(members, &sets.iter().map(|s| s.to_vec()).collect())
    }

    #[test]
    fn two_sets_meeting() {
        let c = ordered_cech(&cover(2, &[&[0], &[1], &[0, 1]])).unwrap();
        assert_eq!(c.ranks(), &[2, 1]);
        // omitting index 0 lands in X_1 with +1, omitting index 1 lands in X_0 with −1
        assert_eq!(c.differentials()[0], IntMatrix::from_i64_rows(&[&[-1], &[1]]));
        let h = c.homology();
        assert_eq!(h[0], AbelianGroup { free_rank: 1, torsion: vec![] });
        assert!(h[1].is_zero());
    }

    #[test]
    fn single_and_triangle() {
        let c = ordered_cech(&cover(1, &[&[0]])).unwrap();
        assert_eq!(c.ranks(), &[1]);
        let t = ordered_cech(&cover(3, &[&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]])).unwrap();
        let h = t.homology();
        assert_eq!((h[0].free_rank, h[1].free_rank), (1, 1));
        let full = ordered_cech(&cover(3, &[&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]])).unwrap();
        assert!(full.is_complex());
        let h = full.homology();
        assert_eq!(h.iter().map(|g| g.free_rank).collect::<Vec<_>>(), vec![1, 0, 0]);
    }

    #[test]
    fn inconsistent_inputs() {
        assert!(ordered_cech(&cover(2, &[&[0], &[0, 1]])).is_err());
        let two_comp = CechCover {
            members: 3,
            cells: vec![
                CoverCell { subset: vec![0], components: 1, faces: vec![] },
                CoverCell { subset: vec![1], components: 1, faces: vec![] },
                CoverCell { subset: vec![2], components: 1, faces: vec![] },
                CoverCell { subset: vec![0, 1], components: 2, faces: vec![] },
                CoverCell { subset: vec![0, 2], components: 1, faces: vec![] },
                CoverCell { subset: vec![1, 2], components: 1, faces: vec![] },
                CoverCell { subset: vec![0, 1, 2], components: 1, faces: vec![] },
            ],
        };
        assert!(ordered_cech(&two_comp).is_err());
        let mut fixed = two_comp.clone();
        fixed.cells[6].faces = vec![vec![0], vec![0], vec![1]];
        let c = ordered_cech(&fixed).unwrap();
        assert!(c.is_complex());
        assert_eq!(c.ranks(), &[3, 4, 1]);
    }

    #[test]
    fn rz_shapes() {
        let one = rz_complex(&cover(1, &[&[0]])).unwrap();
        assert_eq!(one.len(), 2);
        assert_eq!((one[1].twist, one[1].shift, one[1].rank), (1, 2, 1));
        let two = rz_complex(&cover(2, &[&[0], &[1], &[0, 1]])).unwrap();
        assert_eq!(two.iter().map(|t| (t.twist, t.shift, t.rank)).collect::<Vec<_>>(), vec![(0, 0, 1), (1, 2, 2), (2, 4, 1)]);
        let a3 = rz_complex(&cover_from_graph(&dynkin(DynkinKind::A, 3).unwrap())).unwrap();
        assert_eq!(a3.iter().map(|t| t.rank).collect::<Vec<_>>(), vec![1, 3, 2]);
        assert!((&a3[1].differential * &a3[2].differential).is_zero());
    }
}
