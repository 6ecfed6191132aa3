//! Diagonalization over `ℤ_ε` by paired elimination on the two projections.
//!
//! Every elementary step is a `ℤ_ε` operation, so `π` of it acts on both
//! projections at once. The only non-obvious step is the pair reduction
//! `(a, b)·V = (g, 0)`: each projection has its own family of integer
//! solutions and we look for a pair whose entries agree mod 2.

use super::{snf_int, Reducer, SnfResult};
use crate::gwring::GwElement;
use crate::matrix::GwMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// The elimination got stuck: no implemented move clears `other` against `pivot`.
///
/// `partial` holds the transforms reached so far (`A = S·W·T` still holds) and
/// the Smith invariants of both projections are attached so callers can fall
/// back to the classical computation.
#[derive(Clone, Debug, PartialEq, Serialize, thiserror::Error)]
#[error("no liftable diagonalization over ℤ_ε: stuck on the pair ({pivot}, {other}) at position {position}")]
pub struct Obstruction {
    pub position: usize,
    pub pivot: GwElement,
    pub other: GwElement,
    pub partial: SnfResult<GwElement>,
    #[serde(with = "crate::serde_int::vec")]
    pub plus_invariants: Vec<BigInt>,
    #[serde(with = "crate::serde_int::vec")]
    pub minus_invariants: Vec<BigInt>,
}

const MAX_ROUNDS: usize = 256;

type Mat2 = [[BigInt; 2]; 2];
type Mod2 = [[u8; 2]; 2];

/// All of `GL₂(F₂)`, in a fixed order.
const GL2_F2: [Mod2; 6] = [
    [[1, 0], [0, 1]],
    [[1, 0], [1, 1]],
    [[1, 1], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, 1], [1, 1]],
    [[1, 1], [1, 0]],
];

fn mod2(m: &Mat2) -> Mod2 {
    let r = |v: &BigInt| if v.is_odd() { 1 } else { 0 };
    [[r(&m[0][0]), r(&m[0][1])], [r(&m[1][0]), r(&m[1][1])]]
}

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Integer matrices `V` with `(a, b)·V = (±gcd, 0)` and `det V = ±1`, one per
/// class mod 2. With `a = b = 0` every class of `GL₂(F₂)` is reachable.
fn side_solutions(a: &BigInt, b: &BigInt) -> Vec<Mat2> {
    if a.is_zero() && b.is_zero() {
        return GL2_F2
            .iter()
            .map(|m| m.map(|row| row.map(BigInt::from)))
            .collect();
    }
    let e = a.extended_gcd(b);
    let (g, x, y) = if e.gcd.is_negative() { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
    let u0: Mat2 = [[x, -(b / &g)], [y, a / &g]];
    (0..2)
        .map(|k| mul2(&u0, &[[BigInt::one(), BigInt::zero()], [BigInt::from(k), BigInt::one()]]))
        .collect()
}

/// `V` over `ℤ_ε` with unit determinant and `(a, b)·V = (g, 0)`.
pub(crate) fn pair_reduce(a: &GwElement, b: &GwElement) -> Option<(GwElement, [[GwElement; 2]; 2])> {
    let plus = side_solutions(&a.plus(), &b.plus());
    let minus = side_solutions(&a.minus(), &b.minus());
    let (vp, vm) = plus
        .iter()
        .find_map(|p| minus.iter().find(|m| mod2(m) == mod2(p)).map(|m| (p, m)))?;
    let lift = |i: usize, j: usize| GwElement::lift(&vp[i][j], &vm[i][j]).expect("entries agree mod 2");
    let v = [[lift(0, 0), lift(0, 1)], [lift(1, 0), lift(1, 1)]];
    let g = a * &v[0][0] + b * &v[1][0];
    debug_assert!((a * &v[0][1] + b * &v[1][1]).is_zero());
    Some((g, v))
}

fn transpose2(v: &[[GwElement; 2]; 2]) -> [[GwElement; 2]; 2] {
    [[v[0][0].clone(), v[1][0].clone()], [v[0][1].clone(), v[1][1].clone()]]
}

/// Clears `w[(t, j)]` for `j ∈ cols` and `w[(i, t)]` for `i ∈ rows`.
/// On failure returns the pair that could not be reduced.
fn clear_cross(
    r: &mut Reducer<GwElement>,
    t: usize,
    rows: &[usize],
    cols: &[usize],
) -> Result<(), (GwElement, GwElement)> {
    for _ in 0..MAX_ROUNDS {
        for &j in cols {
            let b = r.w[(t, j)].clone();
            if b.is_zero() {
                continue;
            }
            let p = r.w[(t, t)].clone();
            if let Some(q) = b.exact_div(&p) {
                r.col_add(j, t, &-q);
            } else if let Some((_, v)) = pair_reduce(&p, &b) {
                r.col_mix(t, j, &v);
            } else {
                return Err((p, b));
            }
        }
        for &i in rows {
            let b = r.w[(i, t)].clone();
            if b.is_zero() {
                continue;
            }
            let p = r.w[(t, t)].clone();
            if let Some(q) = b.exact_div(&p) {
                r.row_add(i, t, &-q);
            } else if let Some((_, v)) = pair_reduce(&p, &b) {
                r.row_mix(t, i, &transpose2(&v));
            } else {
                return Err((p, b));
            }
        }
        if cols.iter().all(|&j| r.w[(t, j)].is_zero()) && rows.iter().all(|&i| r.w[(i, t)].is_zero()) {
            return Ok(());
        }
    }
    Err((r.w[(t, t)].clone(), GwElement::zero()))
}

fn comparable(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() || b.is_zero() || (b % a).is_zero() || (a % b).is_zero()
}

fn chain_compatible(a: &GwElement, b: &GwElement) -> bool {
    comparable(&a.plus(), &b.plus()) && comparable(&a.minus(), &b.minus())
}

/// Unit pivots first, then the smallest by `size_key`, ties row-major.
fn pivot_candidates(w: &GwMatrix, t: usize) -> Vec<(usize, usize)> {
    let mut c: Vec<(usize, usize)> = (t..w.rows())
        .flat_map(|i| (t..w.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| !w[(i, j)].is_zero())
        .collect();
    c.sort_by_key(|&(i, j)| (!w[(i, j)].is_unit(), w[(i, j)].size_key(), i, j));
    c
}

/// Orders the diagonal so that `|p₊|` reproduces the Smith diagonal of `A₊`:
/// ascending `|p₊|` with `p₊ = 0` last, then `|p₋|`.
fn sort_key(d: &GwElement) -> (bool, BigInt, bool, BigInt, BigInt, BigInt) {
    let (p, m) = d.project();
    (p.is_zero(), p.abs(), d.is_zero(), m.abs(), d.x.clone(), d.y.clone())
}

fn abs_sorted(v: impl Iterator<Item = BigInt>) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = v.map(|x| x.abs()).collect();
    v.sort();
    v
}

/// Diagonalizes `a` over `ℤ_ε` with invertible transforms.
///
/// On success the diagonal is unit-normalized (both projections nonnegative)
/// and its `p₊` entries are exactly the Smith diagonal of `a₊`; the `p₋`
/// entries agree with the Smith diagonal of `a₋` up to order.
pub fn diagonalize_zeps(a: &GwMatrix) -> Result<SnfResult<GwElement>, Obstruction> {
    let plus_inv = snf_int(&a.plus_part()).diagonal();
    let minus_inv = snf_int(&a.minus_part()).diagonal();
    let obstruct = |r: &Reducer<GwElement>, position: usize, (pivot, other): (GwElement, GwElement)| Obstruction {
        position,
        pivot,
        other,
        partial: r.clone().into_result(),
        plus_invariants: plus_inv.clone(),
        minus_invariants: minus_inv.clone(),
    };

    let mut red = Reducer::new(a);
    let n = red.rows().min(red.cols());
    for t in 0..n {
        let candidates = pivot_candidates(&red.w, t);
        if candidates.is_empty() {
            break;
        }
        let rows: Vec<usize> = (t + 1..red.rows()).collect();
        let cols: Vec<usize> = (t + 1..red.cols()).collect();
        let mut first_failure = None;
        let mut cleared = None;
        for &(i, j) in &candidates {
            let mut trial = red.clone();
            trial.row_swap(t, i);
            trial.col_swap(t, j);
            match clear_cross(&mut trial, t, &rows, &cols) {
                Ok(()) => {
                    cleared = Some(trial);
                    break;
                }
                Err(pair) => {
                    first_failure.get_or_insert(pair);
                }
            }
        }
        match cleared {
            Some(r) => red = r,
            None => return Err(obstruct(&red, t, first_failure.expect("at least one candidate"))),
        }
    }

    // Replace incomparable diagonal pairs by (gcd, lcm) on both projections.
    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                if chain_compatible(&red.w[(i, i)], &red.w[(j, j)]) {
                    continue;
                }
                let mut trial = red.clone();
                trial.row_add(i, j, &GwElement::one());
                if clear_cross(&mut trial, i, &[j], &[j]).is_ok() {
                    red = trial;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    for t in 0..n {
        let d = red.w[(t, t)].clone();
        if !d.is_zero() {
            let (u, _) = d.normalize();
            red.row_scale(t, &u.inverse().expect("normalizing factor is a unit"));
        }
    }
    for pos in 0..n {
        let best = (pos..n).min_by_key(|&k| sort_key(&red.w[(k, k)])).expect("nonempty range");
        red.row_swap(pos, best);
        red.col_swap(pos, best);
    }

    let diag = red.w.diagonal_entries();
    let compatible = abs_sorted(diag.iter().map(GwElement::plus)) == abs_sorted(plus_inv.iter().cloned())
        && abs_sorted(diag.iter().map(GwElement::minus)) == abs_sorted(minus_inv.iter().cloned());
    if !compatible {
        let pair = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !chain_compatible(&diag[i], &diag[j]))
            .map(|(i, j)| (diag[i].clone(), diag[j].clone()))
            .unwrap_or_else(|| (GwElement::zero(), GwElement::zero()));
        return Err(obstruct(&red, 0, pair));
    }
    Ok(red.into_result())
}
