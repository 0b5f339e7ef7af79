//! Monomial representations of `O_n` and `O_∞` on a labelled orthonormal basis.

use std::fmt;
use std::sync::Arc;

use crate::embedding::EmbeddedMemo;
use crate::error::{Error, Result};
use crate::label::{BasisLabel, Scalar};
use crate::series::StripMemo;
use crate::term::MonomialTerm;

/// Which Cuntz algebra a representation is a representation of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    Finite(usize),
    Infinity,
}

impl Signature {
    pub fn finite(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSignature(n));
        }
        Ok(Signature::Finite(n))
    }

    pub fn arity(self) -> Option<usize> {
        match self {
            Signature::Finite(n) => Some(n),
            Signature::Infinity => None,
        }
    }

    pub fn require_finite(self) -> Result<usize> {
        self.arity().ok_or(Error::WrongSignature(self))
    }

    /// Number of generators to probe: `n` for `O_n`, `j_bound` for `O_∞`.
    pub fn generator_bound(self, j_bound: usize) -> usize {
        self.arity().unwrap_or(j_bound)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Finite(n) => write!(f, "O_{n}"),
            Signature::Infinity => f.write_str("O_inf"),
        }
    }
}

/// Range decomposition of a basis vector: `e_x = phase · s_generator e_pre`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub generator: usize,
    pub phase: Scalar,
    pub pre: BasisLabel,
}

/// Behaviour of one concrete representation.
///
/// Implementors may assume generator indices have already been validated
/// against [`RepAction::signature`].
pub trait RepAction: Send + Sync {
    fn signature(&self) -> Signature;

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm>;

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm>;

    /// The unique generator whose range contains `e_x`, if any.
    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>>;

    /// Canonical sample of the label space, deterministic in `depth`.
    fn labels(&self, depth: usize) -> Vec<BasisLabel>;

    /// Canonicality predicate for labels of this representation.
    fn contains(&self, x: &BasisLabel) -> bool;

    fn is_zero_rep(&self) -> bool {
        false
    }

    /// Descriptor string recording how the representation was built.
    fn describe(&self) -> String;
}

/// Shared handle to an immutable monomial representation.
#[derive(Clone)]
pub struct MonomialRep {
    inner: Arc<dyn RepAction>,
    memo: Arc<StripMemo>,
    embedded: Arc<EmbeddedMemo>,
}

impl MonomialRep {
    pub fn new<R: RepAction + 'static>(rep: R) -> Self {
        MonomialRep {
            inner: Arc::new(rep),
            memo: Arc::default(),
            embedded: Arc::default(),
        }
    }

    pub(crate) fn strip_memo(&self) -> &StripMemo {
        &self.memo
    }

    pub(crate) fn embedded_memo(&self) -> &EmbeddedMemo {
        &self.embedded
    }

    pub fn signature(&self) -> Signature {
        self.inner.signature()
    }

    fn check_generator(&self, generator: usize) -> Result<()> {
        let signature = self.signature();
        let ok = match signature {
            Signature::Finite(n) => (1..=n).contains(&generator),
            Signature::Infinity => generator >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGenerator {
                index: generator,
                signature,
            })
        }
    }

    pub fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        self.check_generator(generator)?;
        self.inner.apply(generator, x)
    }

    pub fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        self.check_generator(generator)?;
        self.inner.apply_adjoint(generator, x)
    }

    pub fn apply_term(
        &self,
        generator: usize,
        adjoint: bool,
        term: MonomialTerm,
    ) -> Result<MonomialTerm> {
        term.then(|x| {
            if adjoint {
                self.apply_adjoint(generator, x)
            } else {
                self.apply(generator, x)
            }
        })
    }

    pub fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        self.inner.range_decode(x)
    }

    pub fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        self.inner.labels(depth)
    }

    pub fn contains(&self, x: &BasisLabel) -> bool {
        self.inner.contains(x)
    }

    pub fn is_zero_rep(&self) -> bool {
        self.inner.is_zero_rep()
    }

    pub fn describe(&self) -> String {
        self.inner.describe()
    }

    /// Identity of the underlying allocation, usable as a memoization key.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.inner) as *const () as usize
    }
}

impl fmt::Debug for MonomialRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonomialRep")
            .field("signature", &self.signature())
            .field("describe", &self.describe())
            .finish()
    }
}

impl fmt::Display for MonomialRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
