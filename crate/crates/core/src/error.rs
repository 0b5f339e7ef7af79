use crate::label::BasisLabel;
use crate::rep::Signature;

/// Errors raised while building or evaluating monomial representations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid signature: arity {0} (finite arity must be at least 2)")]
    InvalidSignature(usize),

    #[error("invalid phase {re}+{im}i: modulus must be 1")]
    InvalidPhase { re: f64, im: f64 },

    #[error("generator index {index} out of range for {signature}")]
    InvalidGenerator { index: usize, signature: Signature },

    #[error("embedded index must be at least 1, got {0}")]
    InvalidIndex(usize),

    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch {
        expected: Signature,
        found: Signature,
    },

    #[error("operation requires a finite signature, found {0}")]
    WrongSignature(Signature),

    #[error("empty direct sum")]
    EmptySum,

    #[error("label {0} is not a basis vector of this representation")]
    ForeignLabel(BasisLabel),

    #[error("backward s_n-orbit of {label} did not close after {iterations} steps")]
    StripDivergence {
        label: BasisLabel,
        iterations: usize,
    },

    #[error("label index overflow")]
    LabelOverflow,

    #[error("operation is undefined on the zero representation")]
    ZeroRepresentation,

    #[error("internal consistency violated: {0}")]
    Inconsistent(String),

    #[error("intertwiner check failed on the source pair: {0}")]
    NotAMorphism(String),

    #[error("invalid closed-form case: {0}")]
    InvalidCase(String),

    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("bad representation descriptor {descriptor:?}: {message}")]
    Descriptor { descriptor: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
