//! Affine hyperplane arrangements over `ℚ`: intersection flats and the Tate
//! decompositions of the complement, its dual and its homotopy at infinity.

mod parse;

pub use parse::{parse_arrangement, serialize_arrangement};

use crate::mumford::{Atom, MotiveExpression};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub const DEFAULT_MAX_HYPERPLANES: usize = 20;

/// `normal · x = offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperplane {
    #[serde(with = "crate::serde_int::vec")]
    pub normal: Vec<BigInt>,
    #[serde(with = "crate::serde_int")]
    pub offset: BigInt,
}

impl Hyperplane {
    pub fn new(normal: &[i64], offset: i64) -> Self {
        Hyperplane { normal: normal.iter().map(|&a| a.into()).collect(), offset: offset.into() }
    }

    /// Primitive representative with positive leading normal entry.
    fn canonical(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.normal.iter().chain(std::iter::once(&self.offset)).cloned().collect();
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if !g.is_zero() {
            for x in &mut v {
                *x /= &g;
            }
        }
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in &mut v {
                *x = -&*x;
            }
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub dimension: usize,
    pub hyperplanes: Vec<Hyperplane>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArrangementError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("hyperplane {index} has {found} coefficients, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("hyperplane {index} has a zero normal vector")]
    ZeroNormal { index: usize },
    #[error("hyperplanes {first} and {second} coincide")]
    DuplicateHyperplane { first: usize, second: usize },
    #[error("{count} hyperplanes exceed the enumeration bound {bound}")]
    TooManyHyperplanes { count: usize, bound: usize },
    #[error("intersections {smaller:?} and {larger:?} have the same codimension")]
    NotNowhereDense { smaller: Vec<usize>, larger: Vec<usize> },
    #[error("intersection {subset:?} has codimension {codim}, not {}", subset.len())]
    NotNormalCrossing { subset: Vec<usize>, codim: usize },
}

impl ArrangementError {
    pub fn kind(&self) -> &'static str {
        match self {
            ArrangementError::Parse { .. } => "ParseError",
            ArrangementError::DimensionMismatch { .. } => "DimensionMismatch",
            ArrangementError::ZeroNormal { .. } => "ZeroNormal",
            ArrangementError::DuplicateHyperplane { .. } => "DuplicateHyperplane",
            ArrangementError::TooManyHyperplanes { .. } => "TooManyHyperplanes",
            ArrangementError::NotNowhereDense { .. } => "NotNowhereDense",
            ArrangementError::NotNormalCrossing { .. } => "NotNormalCrossing",
        }
    }
}

impl Arrangement {
    pub fn new(dimension: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self, ArrangementError> {
        let arr = Arrangement { dimension, hyperplanes };
        arr.validate()?;
        Ok(arr)
    }

    /// `x_i = 0` for `i < e` in `A^d`.
    pub fn coordinate(e: usize, d: usize) -> Self {
        assert!(e <= d, "more coordinate hyperplanes than coordinates");
        let hyperplanes = (0..e)
            .map(|i| {
                let mut normal = vec![0i64; d];
                normal[i] = 1;
                Hyperplane::new(&normal, 0)
            })
            .collect();
        Arrangement { dimension: d, hyperplanes }
    }

    pub fn validate(&self) -> Result<(), ArrangementError> {
        let mut seen: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if h.normal.len() != self.dimension {
                return Err(ArrangementError::DimensionMismatch {
                    index: i,
                    expected: self.dimension,
                    found: h.normal.len(),
                });
            }
            if h.normal.iter().all(Zero::is_zero) {
                return Err(ArrangementError::ZeroNormal { index: i });
            }
            if let Some(&first) = seen.get(&h.canonical()) {
                return Err(ArrangementError::DuplicateHyperplane { first, second: i });
            }
            seen.insert(h.canonical(), i);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }
}

/// Echelon rows of `[A | b]`, each with its pivot column.
#[derive(Clone)]
struct Echelon {
    rows: Vec<(usize, Vec<BigInt>)>,
}

enum Extension {
    Dependent,
    Inconsistent,
    Independent(Echelon),
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

impl Echelon {
    fn extend(&self, h: &Hyperplane, d: usize) -> Extension {
        let mut v: Vec<BigInt> = h.normal.iter().chain(std::iter::once(&h.offset)).cloned().collect();
        for (col, row) in &self.rows {
            if v[*col].is_zero() {
                continue;
            }
            let (a, b) = (row[*col].clone(), v[*col].clone());
            v = primitive(v.iter().zip(row).map(|(x, r)| x * &a - r * &b).collect());
        }
        match v[..d].iter().position(|x| !x.is_zero()) {
            Some(col) => {
                let mut next = self.clone();
                next.rows.push((col, v));
                Extension::Independent(next)
            }
            None if v[d].is_zero() => Extension::Dependent,
            None => Extension::Inconsistent,
        }
    }
}

/// Codimension of `Z_J` for every subset `J` (bitmask), `None` when empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatData {
    hyperplanes: usize,
    codim: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatRecord {
    pub subset: Vec<usize>,
    pub consistent: bool,
    pub codim: Option<usize>,
    pub nowhere_dense_ok: bool,
}

fn members(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

impl FlatData {
    pub fn codim(&self, subset: &[usize]) -> Option<usize> {
        self.codim[subset.iter().fold(0usize, |m, &i| m | (1 << i))]
    }

    /// Consistent subsets `(J, c_J)`, including `∅`.
    pub fn consistent(&self) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
        self.codim.iter().enumerate().filter_map(move |(mask, c)| c.map(|c| (members(mask, self.hyperplanes), c)))
    }

    /// A consistent `J ⊊ K` with `c_K = c_J`, if any. One-element extensions
    /// suffice because `c` is monotone along inclusions.
    pub fn nowhere_dense_violation(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        (0..self.codim.len()).find_map(|mask| self.violation_at(mask).map(|k| (members(mask, self.hyperplanes), members(k, self.hyperplanes))))
    }

    fn violation_at(&self, mask: usize) -> Option<usize> {
        let c = self.codim[mask]?;
        (0..self.hyperplanes)
            .map(|i| mask | (1 << i))
            .filter(|&k| k != mask)
            .find(|&k| self.codim[k] == Some(c))
    }

    pub fn is_normal_crossing(&self) -> bool {
        self.normal_crossing_violation().is_none()
    }

    fn normal_crossing_violation(&self) -> Option<(Vec<usize>, usize)> {
        self.consistent().find(|(j, c)| *c != j.len())
    }

    pub fn records(&self) -> Vec<FlatRecord> {
        (0..self.codim.len())
            .map(|mask| FlatRecord {
                subset: members(mask, self.hyperplanes),
                consistent: self.codim[mask].is_some(),
                codim: self.codim[mask],
                nowhere_dense_ok: self.violation_at(mask).is_none(),
            })
            .collect()
    }
}

pub fn flats(arr: &Arrangement) -> Result<FlatData, ArrangementError> {
    flats_with_bound(arr, DEFAULT_MAX_HYPERPLANES)
}

/// Enumerates all subsets depth-first, extending an echelon form of `[A | b]`
/// one hyperplane at a time; supersets of inconsistent subsets are skipped.
pub fn flats_with_bound(arr: &Arrangement, bound: usize) -> Result<FlatData, ArrangementError> {
    let n = arr.len();
    if n > bound || n >= usize::BITS as usize - 1 {
        return Err(ArrangementError::TooManyHyperplanes { count: n, bound });
    }
    let mut codim = vec![None; 1 << n];
    codim[0] = Some(0);
    let mut stack = vec![(0usize, 0usize, Echelon { rows: vec![] })];
    while let Some((mask, start, ech)) = stack.pop() {
        for k in start..n {
            let next = mask | (1 << k);
            match ech.extend(&arr.hyperplanes[k], arr.dimension) {
                Extension::Inconsistent => {}
                Extension::Dependent => {
                    codim[next] = Some(ech.rows.len());
                    stack.push((next, k + 1, ech.clone()));
                }
                Extension::Independent(e) => {
                    codim[next] = Some(e.rows.len());
                    stack.push((next, k + 1, e));
                }
            }
        }
    }
    Ok(FlatData { hyperplanes: n, codim })
}

/// `m(n)`: number of consistent `J` (including `∅`) with `c_J = n`.
pub fn multiplicities(arr: &Arrangement) -> Result<BTreeMap<usize, u64>, ArrangementError> {
    Ok(multiplicities_of(&flats(arr)?))
}

fn multiplicities_of(f: &FlatData) -> BTreeMap<usize, u64> {
    let mut m = BTreeMap::new();
    for (_, c) in f.consistent() {
        *m.entry(c).or_insert(0) += 1;
    }
    m
}

/// `⊕_J 𝟙(c_J)[2c_J − |J|]`, which is `⊕ m(n)·𝟙(n)[n]` for normal crossings.
pub fn complement_decomposition(arr: &Arrangement) -> Result<MotiveExpression, ArrangementError> {
    let f = flats(arr)?;
    if let Some((smaller, larger)) = f.nowhere_dense_violation() {
        return Err(ArrangementError::NotNowhereDense { smaller, larger });
    }
    let mut e = MotiveExpression::zero();
    for (j, c) in f.consistent() {
        let c = c as i64;
        e.push(Atom::tate(c, 2 * c - j.len() as i64), 1);
    }
    Ok(e)
}

fn normal_crossing_flats(arr: &Arrangement) -> Result<FlatData, ArrangementError> {
    let f = flats(arr)?;
    if let Some((subset, codim)) = f.normal_crossing_violation() {
        return Err(ArrangementError::NotNormalCrossing { subset, codim });
    }
    Ok(f)
}

/// `⊕_i m(i)·𝟙(i)[i] ⊕ ⊕_j m(j)·𝟙(d−j)[2d−j−1]`.
pub fn infinity_decomposition(arr: &Arrangement) -> Result<MotiveExpression, ArrangementError> {
    let m = multiplicities_of(&normal_crossing_flats(arr)?);
    let d = arr.dimension as i64;
    let mut e = MotiveExpression::zero();
    for (&n, &count) in &m {
        let n = n as i64;
        e.push(Atom::tate(n, n), count);
        e.push(Atom::tate(d - n, 2 * d - n - 1), count);
    }
    Ok(e)
}

/// `⊕_K 𝟙(−c_K)[−2c_K + |K|]`, the dual of the complement.
pub fn dual_decomposition(arr: &Arrangement) -> Result<MotiveExpression, ArrangementError> {
    let f = normal_crossing_flats(arr)?;
    let mut e = MotiveExpression::zero();
    for (k, c) in f.consistent() {
        let c = c as i64;
        e.push(Atom::tate(-c, -2 * c + k.len() as i64), 1);
    }
    Ok(e)
}

/// Compactly supported version: the dual twisted by `(d)[2d]`.
pub fn compact_support_decomposition(arr: &Arrangement) -> Result<MotiveExpression, ArrangementError> {
    let d = arr.dimension as i64;
    Ok(dual_decomposition(arr)?.twisted(d, 2 * d))
}
