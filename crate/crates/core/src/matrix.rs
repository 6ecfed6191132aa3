//! Dense row-major matrices over `ℤ` and `ℤ_ε`.

use crate::gwring::GwElement;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Commutative ring operations needed by the matrix routines.
pub trait RingElem:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
{
    fn is_ring_unit(&self) -> bool;

    /// Inverse of a unit, `None` otherwise.
    fn unit_inverse(&self) -> Option<Self>;

    /// Determinant by the fastest exact route available for the ring.
    fn fast_det(m: &Matrix<Self>) -> Self {
        m.det()
    }
}

impl RingElem for BigInt {
    fn is_ring_unit(&self) -> bool {
        self.is_one() || (-self).is_one()
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.is_ring_unit().then(|| self.clone())
    }

    fn fast_det(m: &IntMatrix) -> BigInt {
        m.det_bareiss()
    }
}

impl RingElem for GwElement {
    fn is_ring_unit(&self) -> bool {
        self.is_unit()
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.inverse()
    }

    // π is an injective ring map, so det lifts from the two projections.
    fn fast_det(m: &GwMatrix) -> GwElement {
        let p = m.plus_part().det_bareiss();
        let q = m.minus_part().det_bareiss();
        GwElement::lift(&p, &q).expect("projections of a ℤ_ε determinant agree mod 2")
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type GwMatrix = Matrix<GwElement>;

impl<T: RingElem> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length does not match its shape");
        Matrix { rows, cols, data }
    }

    /// Panics on ragged rows.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[T]) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rows and columns reindexed: entry `(i, j)` of the result is `self[(perm[i], perm[j])]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.rows);
        let mut out = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(perm[i], perm[j])].clone();
            }
        }
        out
    }

    /// Leading principal `k × k` block.
    pub fn leading_minor(&self, k: usize) -> Self {
        let mut out = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Division-free determinant by Laplace expansion along rows, memoized over
    /// column subsets. Valid over any commutative ring; `O(n·2ⁿ)`.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        assert!(n < 26, "determinant by subset expansion is limited to n < 26");
        // minors[mask] = det of rows (n - |mask|)..n with the columns in mask
        let mut minors = vec![T::zero(); 1 << n];
        minors[0] = T::one();
        for mask in 1usize..(1 << n) {
            let k = mask.count_ones() as usize;
            let row = n - k;
            let mut acc = T::zero();
            let mut sign_pos = true;
            for col in 0..n {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &self[(row, col)];
                if !entry.is_zero() {
                    let term = entry.clone() * &minors[mask & !(1 << col)];
                    acc = if sign_pos { acc + &term } else { acc - &term };
                }
                sign_pos = !sign_pos;
            }
            minors[mask] = acc;
        }
        minors[(1 << n) - 1].clone()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: RingElem> Mul<&Matrix<T>> for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)].clone() + &(a.clone() * &rhs[(k, j)]);
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// Fraction-free Bareiss elimination.
    pub fn det_bareiss(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.to_rows();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

impl GwMatrix {
    /// Entrywise `ε ↦ 1`.
    pub fn plus_part(&self) -> IntMatrix {
        self.map(GwElement::plus)
    }

    /// Entrywise `ε ↦ −1`.
    pub fn minus_part(&self) -> IntMatrix {
        self.map(GwElement::minus)
    }
}

impl<T: RingElem> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Nested arrays of JSON integers, one inner array per row.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                crate::serde_int::vec::serialize(self.0, s)
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&Row(self.row(i)))?;
        }
        seq.end()
    }
}

/// Nested arrays of `{"x": .., "y": ..}` objects.
impl Serialize for GwMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}
