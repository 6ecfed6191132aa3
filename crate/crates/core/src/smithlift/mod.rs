//! Smith normal form over `ℤ` and diagonalization over `ℤ_ε`.
//!
//! Every routine keeps a working matrix `W` together with transforms `S`, `T`
//! such that `A = S·W·T` holds after each elementary step.

mod zeps;

pub use zeps::{diagonalize_zeps, Obstruction};

use crate::matrix::{IntMatrix, Matrix, RingElem};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

/// `A = s · d · t` with `s`, `t` invertible and `d` diagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "Matrix<T>: Serialize"))]
pub struct SnfResult<T> {
    pub s: Matrix<T>,
    pub d: Matrix<T>,
    pub t: Matrix<T>,
}

impl<T: RingElem> SnfResult<T> {
    pub fn diagonal(&self) -> Vec<T> {
        self.d.diagonal_entries()
    }
}

/// Working state for elimination. Invariant: `original = s · w · t`.
#[derive(Clone, Debug)]
pub(crate) struct Reducer<T> {
    pub w: Matrix<T>,
    pub s: Matrix<T>,
    pub t: Matrix<T>,
}

impl<T: RingElem> Reducer<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        Reducer { w: a.clone(), s: Matrix::identity(a.rows()), t: Matrix::identity(a.cols()) }
    }

    pub fn rows(&self) -> usize {
        self.w.rows()
    }

    pub fn cols(&self) -> usize {
        self.w.cols()
    }

    /// `row_i += c · row_j`.
    pub fn row_add(&mut self, i: usize, j: usize, c: &T) {
        for k in 0..self.cols() {
            let v = self.w[(i, k)].clone() + &(c.clone() * &self.w[(j, k)]);
            self.w[(i, k)] = v;
        }
        for k in 0..self.rows() {
            let v = self.s[(k, j)].clone() - &(c.clone() * &self.s[(k, i)]);
            self.s[(k, j)] = v;
        }
    }

    /// `col_i += c · col_j`.
    pub fn col_add(&mut self, i: usize, j: usize, c: &T) {
        for k in 0..self.rows() {
            let v = self.w[(k, i)].clone() + &(c.clone() * &self.w[(k, j)]);
            self.w[(k, i)] = v;
        }
        for k in 0..self.cols() {
            let v = self.t[(j, k)].clone() - &(c.clone() * &self.t[(i, k)]);
            self.t[(j, k)] = v;
        }
    }

    pub fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols() {
            let tmp = self.w[(i, k)].clone();
            self.w[(i, k)] = self.w[(j, k)].clone();
            self.w[(j, k)] = tmp;
        }
        for k in 0..self.rows() {
            let tmp = self.s[(k, i)].clone();
            self.s[(k, i)] = self.s[(k, j)].clone();
            self.s[(k, j)] = tmp;
        }
    }

    pub fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows() {
            let tmp = self.w[(k, i)].clone();
            self.w[(k, i)] = self.w[(k, j)].clone();
            self.w[(k, j)] = tmp;
        }
        for k in 0..self.cols() {
            let tmp = self.t[(i, k)].clone();
            self.t[(i, k)] = self.t[(j, k)].clone();
            self.t[(j, k)] = tmp;
        }
    }

    /// `row_i *= u` for a unit `u`.
    pub fn row_scale(&mut self, i: usize, u: &T) {
        let inv = u.unit_inverse().expect("row scaling by a non-unit");
        for k in 0..self.cols() {
            let v = u.clone() * &self.w[(i, k)];
            self.w[(i, k)] = v;
        }
        for k in 0..self.rows() {
            let v = self.s[(k, i)].clone() * &inv;
            self.s[(k, i)] = v;
        }
    }

    /// `[row_i; row_j] ← u · [row_i; row_j]` for `u` with unit determinant.
    pub fn row_mix(&mut self, i: usize, j: usize, u: &[[T; 2]; 2]) {
        for k in 0..self.cols() {
            let a = self.w[(i, k)].clone();
            let b = self.w[(j, k)].clone();
            self.w[(i, k)] = u[0][0].clone() * &a + &(u[0][1].clone() * &b);
            self.w[(j, k)] = u[1][0].clone() * &a + &(u[1][1].clone() * &b);
        }
        let inv = inverse2(u);
        for k in 0..self.rows() {
            let a = self.s[(k, i)].clone();
            let b = self.s[(k, j)].clone();
            self.s[(k, i)] = a.clone() * &inv[0][0] + &(b.clone() * &inv[1][0]);
            self.s[(k, j)] = a * &inv[0][1] + &(b * &inv[1][1]);
        }
    }

    /// `[col_i, col_j] ← [col_i, col_j] · v` for `v` with unit determinant.
    pub fn col_mix(&mut self, i: usize, j: usize, v: &[[T; 2]; 2]) {
        for k in 0..self.rows() {
            let a = self.w[(k, i)].clone();
            let b = self.w[(k, j)].clone();
            self.w[(k, i)] = a.clone() * &v[0][0] + &(b.clone() * &v[1][0]);
            self.w[(k, j)] = a * &v[0][1] + &(b * &v[1][1]);
        }
        let inv = inverse2(v);
        for k in 0..self.cols() {
            let a = self.t[(i, k)].clone();
            let b = self.t[(j, k)].clone();
            self.t[(i, k)] = inv[0][0].clone() * &a + &(inv[0][1].clone() * &b);
            self.t[(j, k)] = inv[1][0].clone() * &a + &(inv[1][1].clone() * &b);
        }
    }

    pub fn into_result(self) -> SnfResult<T> {
        SnfResult { s: self.s, d: self.w, t: self.t }
    }
}

fn inverse2<T: RingElem>(u: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    let det = u[0][0].clone() * &u[1][1] - &(u[0][1].clone() * &u[1][0]);
    let di = det.unit_inverse().expect("2×2 transform with non-unit determinant");
    [
        [u[1][1].clone() * &di, -(u[0][1].clone() * &di)],
        [-(u[1][0].clone() * &di), u[0][0].clone() * &di],
    ]
}

/// Smith normal form over `ℤ`.
pub fn snf_int(a: &IntMatrix) -> SnfResult<BigInt> {
    let mut r = Reducer::new(a);
    let n = r.rows().min(r.cols());
    for t in 0..n {
        let Some((pi, pj)) = min_abs_entry(&r.w, (t..r.rows()).flat_map(|i| (t..r.cols()).map(move |j| (i, j))))
        else {
            break;
        };
        r.row_swap(t, pi);
        r.col_swap(t, pj);
        loop {
            let p = r.w[(t, t)].clone();
            for i in t + 1..r.rows() {
                if !r.w[(i, t)].is_zero() {
                    let q = &r.w[(i, t)] / &p;
                    r.row_add(i, t, &-q);
                }
            }
            for j in t + 1..r.cols() {
                if !r.w[(t, j)].is_zero() {
                    let q = &r.w[(t, j)] / &p;
                    r.col_add(j, t, &-q);
                }
            }
            let cross = (t + 1..r.rows()).map(|i| (i, t)).chain((t + 1..r.cols()).map(|j| (t, j)));
            if let Some((i, j)) = min_abs_entry(&r.w, cross) {
                // a remainder smaller than the pivot: it becomes the new pivot
                r.row_swap(t, i);
                r.col_swap(t, j);
                continue;
            }
            let p = r.w[(t, t)].clone();
            let bad = (t + 1..r.rows()).find(|&i| (t + 1..r.cols()).any(|j| !(&r.w[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => r.row_add(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if r.w[(t, t)].is_negative() {
            r.row_scale(t, &BigInt::from(-1));
        }
    }
    r.into_result()
}

fn min_abs_entry(
    w: &IntMatrix,
    positions: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, j) in positions {
        let v = w[(i, j)].abs();
        if v.is_zero() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some(((i, j), v));
        }
    }
    best.map(|(pos, _)| pos)
}

/// True iff `s·d·t = a`, `d` is diagonal and `det s`, `det t` are units.
pub fn verify<T: RingElem>(a: &Matrix<T>, result: &SnfResult<T>) -> bool {
    let shapes = result.s.is_square()
        && result.t.is_square()
        && result.s.rows() == a.rows()
        && result.t.rows() == a.cols()
        && result.d.rows() == a.rows()
        && result.d.cols() == a.cols();
    shapes
        && result.d.is_diagonal()
        && &(&result.s * &result.d) * &result.t == *a
        && T::fast_det(&result.s).is_ring_unit()
        && T::fast_det(&result.t).is_ring_unit()
}

/// Nonnegative diagonal with `d₁ | d₂ | …`.
pub fn is_divisibility_chain(d: &[BigInt]) -> bool {
    d.iter().all(|v| !v.is_negative())
        && d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelCokernel {
    pub kernel_rank: usize,
    pub cokernel_free_rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
}

pub fn kernel_cokernel(a: &IntMatrix) -> KernelCokernel {
    let d = snf_int(a).diagonal();
    let rank = d.iter().filter(|v| !v.is_zero()).count();
    KernelCokernel {
        kernel_rank: a.cols() - rank,
        cokernel_free_rank: a.rows() - rank,
        torsion: d.into_iter().filter(|v| *v > BigInt::from(1)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn ramanujam_matrix() {
        let a = IntMatrix::from_i64_rows(&[&[4, 5, 2], &[5, 3, 0], &[2, 0, -1]]);
        let r = snf_int(&a);
        assert_eq!(r.diagonal(), ints(&[1, 1, 1]));
        assert!(verify(&a, &r));
    }

    #[test]
    fn small_examples() {
        let id = IntMatrix::identity(4);
        assert_eq!(snf_int(&id).d, id);
        let a2 = IntMatrix::from_i64_rows(&[&[-2, 1], &[1, -2]]);
        let r = snf_int(&a2);
        assert_eq!(r.diagonal(), ints(&[1, 3]));
        assert!(verify(&a2, &r));
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(snf_int(&m).diagonal(), ints(&[1, 6]));
        let m = IntMatrix::from_i64_rows(&[&[6, 4, 0], &[4, 6, 0]]);
        let r = snf_int(&m);
        assert!(verify(&m, &r));
        assert_eq!(r.diagonal(), ints(&[2, 10]));
    }

    #[test]
    fn kernel_and_cokernel() {
        let path = IntMatrix::from_i64_rows(&[&[1, -1, 0], &[0, 1, -1]]);
        let kc = kernel_cokernel(&path);
        assert_eq!((kc.kernel_rank, kc.cokernel_free_rank, kc.torsion.len()), (1, 0, 0));
        // points × vertices transposed: vertices × points
        let kc = kernel_cokernel(&path.transpose());
        assert_eq!((kc.kernel_rank, kc.cokernel_free_rank, kc.torsion.len()), (0, 1, 0));
        let kc = kernel_cokernel(&IntMatrix::zeros(1, 1));
        assert_eq!((kc.kernel_rank, kc.cokernel_free_rank), (1, 1));
        let kc = kernel_cokernel(&IntMatrix::from_i64_rows(&[&[2]]));
        assert_eq!((kc.kernel_rank, kc.cokernel_free_rank, kc.torsion), (0, 0, ints(&[2])));
    }

    #[test]
    fn empty_shapes() {
        let z = IntMatrix::zeros(0, 3);
        let r = snf_int(&z);
        assert!(verify(&z, &r));
        assert_eq!(kernel_cokernel(&z).kernel_rank, 3);
    }
}
