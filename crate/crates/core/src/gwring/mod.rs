//! The Grothendieck–Witt model ring `ℤ_ε`, quadratic-form invariants and
//! trace forms of intersection points.

mod element;
mod field;
mod form;

pub use element::{GwElement, NoLift};
pub use form::{
    classify, classify_with, diagonalize_gram, trace_form, ClassifyOptions, DiagonalForm, ExtensionSpec, FieldTag,
    GwClassResult, GwError, GwModelTag, DEFAULT_SQUAREFREE_BOUND, SQUAREFREE_BOUND_ENV,
};
pub(crate) use field::is_prime as is_prime_u64;
