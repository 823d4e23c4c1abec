//! Open quantum types: bases, elaborations, equivalence derivations acting
//! on bases, and a decision procedure for equivalence.

pub mod action;
pub mod basis;
pub mod elaborate;
pub mod normal;

use thiserror::Error;

use crate::syntax::{EquivError, Name, OpenType, UnboundTypeVar};

pub use action::{apply_equiv, apply_inverse, equiv_basis_bijection};
pub use basis::{basis, basis_card, decode, encode, shapes, BasisValue};
pub use elaborate::{gamma, partial_init, partial_init_terms, partial_match, Branches};
pub use normal::{canonical_form, decide_equiv, normalize_type, Clause, NormalForm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpenTypeError {
    #[error(transparent)]
    Unbound(#[from] UnboundTypeVar),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error("index {index} is outside the basis of {ty}")]
    Index { ty: OpenType, index: usize },
    #[error("basis value {value} does not inhabit {ty}")]
    Shape { ty: OpenType, value: String },
    #[error("{equiv} cannot act {} on {value}", if *.forward { "forwards" } else { "backwards" })]
    Stuck { equiv: String, forward: bool, value: String },
    #[error("map between bases of sizes {src} and {dst} is not a bijection")]
    NotBijective { src: usize, dst: usize },
    #[error("wire {0} appears twice in a basis value")]
    DuplicateWire(Name),
}
