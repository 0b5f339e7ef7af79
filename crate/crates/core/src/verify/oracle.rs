//! Direct term-by-term summation of `R_{π,a} = Σ_j π(f_{n,∞}(t_{j+a} t_j*))`.
//!
//! Uses only generator actions and the embedding, never the strip analysis,
//! so it can check [`crate::series::apply_r`] independently.

use crate::embedding::apply_embedded;
use crate::error::Result;
use crate::label::{BasisLabel, ONE};
use crate::rep::MonomialRep;
use crate::term::{MonomialTerm, VectorSum};

const MAX_TAIL: usize = 256;

/// Number of `s_n*` applications after which `(s_n*)^k e_x` is zero or has
/// started to repeat.
pub fn backward_depth(rep: &MonomialRep, x: &BasisLabel) -> Result<usize> {
    let n = rep.signature().require_finite()?;
    let mut seen = Vec::new();
    let mut current = MonomialTerm::unit(x.clone());
    while let MonomialTerm::Basis { label, .. } = current {
        if seen.contains(&label) || seen.len() >= MAX_TAIL {
            break;
        }
        current = rep.apply_adjoint(n, &label)?;
        seen.push(label);
    }
    Ok(seen.len())
}

/// Largest `j` whose summand can be non-zero on `e_x`: past `(n−1)(depth+1)`
/// every `f(t_j)*` applies more `s_n*` than the orbit allows, or revisits the cycle.
pub fn summation_bound(rep: &MonomialRep, x: &BasisLabel) -> Result<usize> {
    let n = rep.signature().require_finite()?;
    Ok((n - 1) * (backward_depth(rep, x)? + 1))
}

/// `Σ_{j ≤ bound} π(f(t_{j+a})) π(f(t_j))* e_x`, or with the roles of `j+a`
/// and `j` swapped for the adjoint.
pub fn r_by_summation(
    rep: &MonomialRep,
    a: usize,
    x: &BasisLabel,
    adjoint: bool,
) -> Result<VectorSum> {
    let bound = summation_bound(rep, x)? + a;
    let mut out = VectorSum::new();
    for j in 1..=bound {
        let (down, up) = if adjoint { (j + a, j) } else { (j, j + a) };
        let pulled = apply_embedded(rep, down, x, true)?;
        let term = pulled.then(|y| apply_embedded(rep, up, y, false))?;
        out.add_term(&term, ONE);
    }
    Ok(out)
}

/// Indices `j ≤ bound` for which `π(f(t_j))* e_x ≠ 0`.
pub fn contributing_indices(rep: &MonomialRep, x: &BasisLabel) -> Result<Vec<usize>> {
    let bound = summation_bound(rep, x)?;
    let mut out = Vec::new();
    for j in 1..=bound {
        if !apply_embedded(rep, j, x, true)?.is_zero() {
            out.push(j);
        }
    }
    Ok(out)
}

/// `Σ_{j ≥ from} π(f(t_j t_j*)) e_x` by summation.
pub fn tail_projection(rep: &MonomialRep, from: usize, x: &BasisLabel) -> Result<VectorSum> {
    let bound = summation_bound(rep, x)?;
    let mut out = VectorSum::new();
    for j in from..=bound.max(from) {
        let term = apply_embedded(rep, j, x, true)?.then(|y| apply_embedded(rep, j, y, false))?;
        out.add_term(&term, ONE);
    }
    Ok(out)
}
