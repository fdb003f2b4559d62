//! Arithmetic of biquadratic extensions `Q(√a₁, √a₂)/Q`.

use thiserror::Error;

pub mod criteria;
pub mod field;
pub mod hilbert;
pub mod rational;
pub mod witness;

pub use criteria::{im_t, Classifier, EmbeddingReport, Witnesses, XClassification, T_VECTORS};
pub use field::{factor_k3_norm, norm_product, BiquadParams, KElement, NormFactors, NormTarget, Sigma};
pub use hilbert::{hasse_invariant, hilbert_symbol, relevant_places, Place};
pub use rational::{squarefree_part, Rational};
pub use witness::{norm_form_witness, q8_witness, two_squares_witness, witness_search};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero input")]
    ZeroInput,
    #[error("not a place of Q: {0}")]
    InvalidPlace(String),
    #[error("{0} does not fit in 64 bits for factoring")]
    TooLarge(String),
    #[error("{0} is not squarefree")]
    NotSquarefree(&'static str),
    #[error("{0}")]
    DependentClasses(&'static str),
    #[error("first argument is a square")]
    SquareParameter,
    #[error("elements belong to different fields")]
    ParamsMismatch,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("norm is zero")]
    DegenerateNorm,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("achieved T-vectors do not form a subspace: {0}")]
    InconsistentImage(String),
}
