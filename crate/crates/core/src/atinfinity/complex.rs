use crate::matrix::IntMatrix;
use crate::smithlift::snf_int;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

/// `C_0 ← C_1 ← … ← C_N` with `differentials[n]: C_{n+1} → C_n` of shape
/// `ranks[n] × ranks[n+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainComplexZ {
    ranks: Vec<usize>,
    differentials: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("differential d_{index} has shape {rows}×{cols}, expected {expected_rows}×{expected_cols}")]
pub struct ShapeError {
    pub index: usize,
    pub rows: usize,
    pub cols: usize,
    pub expected_rows: usize,
    pub expected_cols: usize,
}

/// `ℤ^free_rank ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl ChainComplexZ {
    pub fn new(ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self, ShapeError> {
        let expected = ranks.len().saturating_sub(1);
        for n in 0..expected.max(differentials.len()) {
            let (er, ec) = (ranks.get(n).copied().unwrap_or(0), ranks.get(n + 1).copied().unwrap_or(0));
            let (r, c) = differentials.get(n).map_or((usize::MAX, usize::MAX), |d| (d.rows(), d.cols()));
            if (r, c) != (er, ec) {
                return Err(ShapeError { index: n, rows: r, cols: c, expected_rows: er, expected_cols: ec });
            }
        }
        Ok(ChainComplexZ { ranks, differentials })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differentials(&self) -> &[IntMatrix] {
        &self.differentials
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// `d_n ∘ d_{n+1} = 0` for all `n`.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| (&w[0] * &w[1]).is_zero())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(n, &r)| if n % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    /// `H_n` for `n = 0 … N`.
    pub fn homology(&self) -> Vec<AbelianGroup> {
        let snfs: Vec<Vec<BigInt>> = self.differentials.iter().map(|d| snf_int(d).diagonal()).collect();
        let rank = |n: Option<usize>| {
            n.and_then(|n| snfs.get(n)).map_or(0, |d| d.iter().filter(|v| !v.is_zero()).count())
        };
        (0..self.ranks.len())
            .map(|n| {
                let incoming = rank(Some(n));
                let outgoing = rank(n.checked_sub(1));
                let torsion = snfs
                    .get(n)
                    .map(|d| d.iter().filter(|v| !v.is_zero() && !v.is_one()).cloned().collect())
                    .unwrap_or_default();
                AbelianGroup { free_rank: self.ranks[n] - incoming - outgoing, torsion }
            })
            .collect()
    }
}
