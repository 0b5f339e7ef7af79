use super::OperatorExpr;
use crate::embedding::apply_subalgebra_generator;
use crate::error::Result;
use crate::label::BasisLabel;
use crate::rep::MonomialRep;
use crate::series::{apply_q, apply_r, apply_u};
use crate::term::{MonomialTerm, VectorSum};

/// Evaluates `expr` on the vector `v` in the given representation.
pub fn eval(expr: &OperatorExpr, rep: &MonomialRep, v: &VectorSum) -> Result<VectorSum> {
    eval_vector(expr, rep, v, false)
}

/// Evaluates `expr` (or its adjoint) on a single basis vector.
pub fn eval_basis(
    expr: &OperatorExpr,
    rep: &MonomialRep,
    x: &BasisLabel,
    adjoint: bool,
) -> Result<VectorSum> {
    eval_vector(expr, rep, &VectorSum::basis(x.clone()), adjoint)
}

fn eval_vector(
    expr: &OperatorExpr,
    rep: &MonomialRep,
    v: &VectorSum,
    adjoint: bool,
) -> Result<VectorSum> {
    match expr {
        OperatorExpr::Adjoint(inner) => eval_vector(inner, rep, v, !adjoint),
        OperatorExpr::Product(factors) => {
            let mut acc = v.clone();
            // (AB)* = B*A*: A* acts first
            if adjoint {
                for factor in factors {
                    acc = eval_vector(factor, rep, &acc, true)?;
                }
            } else {
                for factor in factors.iter().rev() {
                    acc = eval_vector(factor, rep, &acc, false)?;
                }
            }
            Ok(acc)
        }
        OperatorExpr::Sum(terms) => {
            let mut out = VectorSum::new();
            for (coeff, body) in terms {
                let c = if adjoint { coeff.conj() } else { *coeff };
                out.add_scaled(&eval_vector(body, rep, v, adjoint)?, c);
            }
            Ok(out)
        }
        atom => {
            let mut out = VectorSum::new();
            for (label, coeff) in v.iter() {
                out.add_term(&apply_atom(atom, rep, label, adjoint)?, *coeff);
            }
            Ok(out)
        }
    }
}

fn apply_atom(
    atom: &OperatorExpr,
    rep: &MonomialRep,
    x: &BasisLabel,
    adjoint: bool,
) -> Result<MonomialTerm> {
    match atom {
        OperatorExpr::Gen { index, .. } if adjoint => rep.apply_adjoint(*index, x),
        OperatorExpr::Gen { index, .. } => rep.apply(*index, x),
        OperatorExpr::Identity => Ok(MonomialTerm::unit(x.clone())),
        OperatorExpr::Q => apply_q(rep, x),
        OperatorExpr::R(a) => apply_r(rep, *a, x, adjoint),
        OperatorExpr::U => apply_u(rep, x, adjoint),
        OperatorExpr::F(j) => apply_subalgebra_generator(rep, *j, x, adjoint),
        OperatorExpr::Adjoint(_) | OperatorExpr::Product(_) | OperatorExpr::Sum(_) => {
            unreachable!("compound expressions are handled by eval_vector")
        }
    }
}
