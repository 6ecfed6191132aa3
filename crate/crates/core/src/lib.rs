//! Exact computations for motivic links of plumbing graphs.
//!
//! The crate works over the model ring `ℤ_ε = ℤ[ε]/(ε² − 1)` of quadratic
//! forms generated by `⟨1⟩` and `⟨−1⟩`. From a weighted dual graph of
//! rational curves it assembles the oriented and quadratic Mumford matrices,
//! diagonalizes them, and reads off formal Tate-motive decompositions of the
//! punctured tubular neighborhood, Artin–Tate homology at infinity, and the
//! decompositions attached to hyperplane arrangement complements.

pub mod arrangements;
pub mod atinfinity;
pub mod gwring;
pub mod matrix;
pub mod mumford;
pub mod plumbing;
pub mod smithlift;

mod serde_int;

pub use gwring::GwElement;
pub use matrix::{GwMatrix, IntMatrix, Matrix};
