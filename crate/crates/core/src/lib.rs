//! Monomial representations of the Cuntz algebras `O_n` and `O_∞`, and the
//! functors `F_{n,m}`, `F_{∞,n}`, `F_{n,∞}` between their representation
//! categories, evaluated exactly on basis vectors.

pub mod builtin;
pub mod closedform;
pub mod descriptor;
pub mod embedding;
pub mod error;
pub mod expr;
pub mod functor;
pub mod intertwiner;
pub mod label;
pub mod rep;
pub mod series;
pub mod term;
pub mod verify;

pub use builtin::{
    direct_sum, make_cycle_rep, make_free_infinity_rep, make_standard_rep, make_zero_rep,
};
pub use embedding::{apply_embedded, decode_index, EmbeddedIndex};
pub use error::{Error, Result};
pub use functor::{functor_apply, functor_extend, functor_morphism, functor_restrict, FunctorSpec};
pub use intertwiner::{check_intertwiner, intertwiner_violation, IntertwinerMap, Violation};
pub use label::{BasisLabel, Scalar};
pub use rep::{Decoded, MonomialRep, RepAction, Signature};
pub use series::{apply_q, apply_r, apply_u, strip_classify, StripResult};
pub use term::{MonomialTerm, VectorSum};
