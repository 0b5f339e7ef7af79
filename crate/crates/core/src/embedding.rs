//! The embedding `f_{n,∞}: O_∞ → O_n`, `t_{(n−1)k+i} ↦ s_n^k s_i`.

use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::label::BasisLabel;
use crate::rep::{MonomialRep, Signature};
use crate::term::MonomialTerm;

/// `j = (n−1)·k + i` with `1 ≤ i ≤ n−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddedIndex {
    pub n: usize,
    pub j: usize,
    pub k: usize,
    pub i: usize,
}

pub fn decode_index(n: usize, j: usize) -> Result<EmbeddedIndex> {
    Signature::finite(n)?;
    if j < 1 {
        return Err(Error::InvalidIndex(j));
    }
    let k = (j - 1) / (n - 1);
    let i = j - (n - 1) * k;
    Ok(EmbeddedIndex { n, j, k, i })
}

/// `π(f_{n,∞}(t_j)) e_x = π(s_n)^k π(s_i) e_x`, or its adjoint
/// `π(s_i)* (π(s_n)*)^k e_x`.
pub fn apply_embedded(
    rep: &MonomialRep,
    j: usize,
    x: &BasisLabel,
    adjoint: bool,
) -> Result<MonomialTerm> {
    let n = rep.signature().require_finite()?;
    let EmbeddedIndex { k, i, .. } = decode_index(n, j)?;
    if adjoint {
        let mut term = MonomialTerm::unit(x.clone());
        for _ in 0..k {
            term = rep.apply_term(n, true, term)?;
        }
        rep.apply_term(i, true, term)
    } else {
        memoized_forward(rep, n, j, x)
    }
}

/// Forward images `f_{n,∞}(t_j) e_x` of one representation, indexed by `x` then `j`.
#[derive(Default)]
pub(crate) struct EmbeddedMemo {
    entries: Mutex<FxHashMap<BasisLabel, Vec<Option<MonomialTerm>>>>,
}

impl EmbeddedMemo {
    const CAPACITY: usize = 1 << 16;

    fn get(&self, j: usize, x: &BasisLabel) -> Option<MonomialTerm> {
        self.entries.lock().ok()?.get(x)?.get(j)?.clone()
    }

    fn insert(&self, j: usize, x: &BasisLabel, term: &MonomialTerm) {
        if let Ok(mut map) = self.entries.lock() {
            if map.len() > Self::CAPACITY {
                map.clear();
            }
            let row = map.entry(x.clone()).or_default();
            if row.len() <= j {
                row.resize(j + 1, None);
            }
            row[j] = Some(term.clone());
        }
    }
}

/// Uses `f(t_j) = s_n f(t_{j−n+1})` for `j ≥ n` so that sweeping `j` upward
/// costs one application per step.
fn memoized_forward(rep: &MonomialRep, n: usize, j: usize, x: &BasisLabel) -> Result<MonomialTerm> {
    if j < n {
        return rep.apply(j, x);
    }
    let memo = rep.embedded_memo();
    if let Some(hit) = memo.get(j, x) {
        return Ok(hit);
    }
    let inner = memoized_forward(rep, n, j + 1 - n, x)?;
    let term = rep.apply_term(n, false, inner)?;
    memo.insert(j, x, &term);
    Ok(term)
}

/// `π(t_j)` for `O_∞` reps, `π(f_{n,∞}(t_j))` for `O_n` reps.
pub(crate) fn apply_subalgebra_generator(
    rep: &MonomialRep,
    j: usize,
    x: &BasisLabel,
    adjoint: bool,
) -> Result<MonomialTerm> {
    match rep.signature() {
        Signature::Infinity if adjoint => rep.apply_adjoint(j, x),
        Signature::Infinity => rep.apply(j, x),
        Signature::Finite(_) => apply_embedded(rep, j, x, adjoint),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{make_cycle_rep, make_free_infinity_rep, make_standard_rep};
    use crate::label::ONE;

    #[test]
    fn index_decoding() {
        let d = decode_index(3, 5).unwrap();
        assert_eq!((d.k, d.i), (2, 1));
        for n in 2..=6 {
            for i in 1..n {
                let d = decode_index(n, i).unwrap();
                assert_eq!((d.k, d.i), (0, i));
            }
        }
        let d = decode_index(2, 7).unwrap();
        assert_eq!((d.k, d.i), (6, 1));
        assert_eq!(decode_index(3, 0).unwrap_err(), Error::InvalidIndex(0));
        assert!(decode_index(1, 1).is_err());
    }

    #[test]
    fn index_decoding_round_trips() {
        for n in 2..=7 {
            for j in 1..200 {
                let d = decode_index(n, j).unwrap();
                assert_eq!((n - 1) * d.k + d.i, j);
                assert!((1..n).contains(&d.i));
            }
        }
    }

    #[test]
    fn embedded_actions() {
        let std2 = make_standard_rep(2).unwrap();
        assert_eq!(
            apply_embedded(&std2, 2, &BasisLabel::Int(0), false).unwrap(),
            MonomialTerm::unit(BasisLabel::Int(1))
        );
        let cyc3 = make_cycle_rep(3, 3, ONE).unwrap();
        assert_eq!(
            apply_embedded(&cyc3, 3, &BasisLabel::omega(), false).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[3, 1]))
        );
        let cyc2 = make_cycle_rep(2, 2, ONE).unwrap();
        assert_eq!(
            apply_embedded(&cyc2, 1, &BasisLabel::omega(), true).unwrap(),
            MonomialTerm::Zero
        );
    }

    #[test]
    fn embedding_requires_finite_signature() {
        let free = make_free_infinity_rep();
        assert_eq!(
            apply_embedded(&free, 1, &BasisLabel::omega(), false).unwrap_err(),
            Error::WrongSignature(Signature::Infinity)
        );
    }
}
