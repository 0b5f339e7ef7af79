//! A small operator-expression language over a representation.
//!
//! ```text
//! expr   := ["+"|"-"] term { ("+"|"-") term }
//! term   := [scalar] factor { factor }
//! factor := atom { "'" }
//! atom   := GEN | "I" | "Q" | "U" | "R[" INT "]" | "f[" INT "]" | "(" expr ")"
//! GEN    := ("s"|"r"|"t") INT
//! scalar := NUMBER | NUMBER "i" | "i"
//! ```
//!
//! Juxtaposition is composition (rightmost factor acts first) and `'` is the
//! adjoint. The generator letter is cosmetic: `s2`, `r2` and `t2` all denote
//! the second generator of whatever representation the expression is
//! evaluated against.

mod eval;
mod parse;

use std::fmt;

use crate::label::{Scalar, ONE};

pub use eval::{eval, eval_basis};
pub use parse::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenFamily {
    S,
    R,
    T,
}

impl GenFamily {
    fn letter(self) -> char {
        match self {
            GenFamily::S => 's',
            GenFamily::R => 'r',
            GenFamily::T => 't',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr {
    Gen {
        family: GenFamily,
        index: usize,
    },
    Adjoint(Box<OperatorExpr>),
    Product(Vec<OperatorExpr>),
    Sum(Vec<(Scalar, OperatorExpr)>),
    Identity,
    Q,
    R(usize),
    U,
    /// `f_{n,∞}(t_j)` for the representation's own arity.
    F(usize),
}

impl OperatorExpr {
    pub fn gen(family: GenFamily, index: usize) -> Self {
        OperatorExpr::Gen { family, index }
    }

    pub fn adjoint(self) -> Self {
        OperatorExpr::Adjoint(Box::new(self))
    }

    /// Product of factors; a single factor is returned unwrapped.
    pub fn product(mut factors: Vec<OperatorExpr>) -> Self {
        if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            OperatorExpr::Product(factors)
        }
    }

    /// Linear combination; a lone unit-coefficient term is returned unwrapped.
    pub fn sum(mut terms: Vec<(Scalar, OperatorExpr)>) -> Self {
        if terms.len() == 1 && terms[0].0 == ONE {
            terms.pop().unwrap().1
        } else {
            OperatorExpr::Sum(terms)
        }
    }

    fn is_atomic(&self) -> bool {
        !matches!(self, OperatorExpr::Product(_) | OperatorExpr::Sum(_))
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, value: f64) -> fmt::Result {
    write!(f, "{value}")
}

/// Writes `coeff·body` with its sign; `first` controls the leading separator.
fn write_term(
    f: &mut fmt::Formatter<'_>,
    coeff: Scalar,
    body: &OperatorExpr,
    first: bool,
) -> fmt::Result {
    let parts: Vec<(f64, bool)> = match (coeff.re != 0.0, coeff.im != 0.0) {
        (_, false) => vec![(coeff.re, false)],
        (false, true) => vec![(coeff.im, true)],
        (true, true) => vec![(coeff.re, false), (coeff.im, true)],
    };
    for (k, (value, imaginary)) in parts.into_iter().enumerate() {
        let negative = value < 0.0;
        match (first && k == 0, negative) {
            (true, false) => {}
            (true, true) => f.write_str("-")?,
            (false, false) => f.write_str(" + ")?,
            (false, true) => f.write_str(" - ")?,
        }
        let magnitude = value.abs();
        if imaginary {
            if magnitude != 1.0 {
                write_number(f, magnitude)?;
            }
            f.write_str("i ")?;
        } else if magnitude != 1.0 {
            write_number(f, magnitude)?;
            f.write_str(" ")?;
        }
        match body {
            OperatorExpr::Sum(_) => write!(f, "({body})")?,
            _ => write!(f, "{body}")?,
        }
    }
    Ok(())
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Gen { family, index } => write!(f, "{}{}", family.letter(), index),
            OperatorExpr::Identity => f.write_str("I"),
            OperatorExpr::Q => f.write_str("Q"),
            OperatorExpr::U => f.write_str("U"),
            OperatorExpr::R(a) => write!(f, "R[{a}]"),
            OperatorExpr::F(j) => write!(f, "f[{j}]"),
            OperatorExpr::Adjoint(inner) if inner.is_atomic() => write!(f, "{inner}'"),
            OperatorExpr::Adjoint(inner) => write!(f, "({inner})'"),
            OperatorExpr::Product(factors) => {
                for (k, factor) in factors.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    if factor.is_atomic() {
                        write!(f, "{factor}")?;
                    } else {
                        write!(f, "({factor})")?;
                    }
                }
                Ok(())
            }
            OperatorExpr::Sum(terms) if terms.is_empty() => f.write_str("0 I"),
            OperatorExpr::Sum(terms) => {
                for (k, (coeff, body)) in terms.iter().enumerate() {
                    write_term(f, *coeff, body, k == 0)?;
                }
                Ok(())
            }
        }
    }
}
