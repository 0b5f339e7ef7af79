//! Power-series presentations of `F_{n,m}(π)(s_j)` in terms of the generators
//! `r_1, …, r_m` of `O_m`, evaluated exactly on basis vectors.
//!
//! Every presentation has the shape
//!
//! ```text
//! finite part  +  Σ_t c_t · Σ_{k≥0} r_m^{k+shift_t} B_t (r_m^k)*
//! ```
//!
//! with `B_t` a finite noncommutative polynomial. On a basis vector `e_x` the
//! `k`-th summand is non-zero only while `(r_m*)^k e_x ≠ 0`; the walk stops at
//! the first zero, and a repeating label means the remaining summands cycle,
//! which is only admissible when `B_t` kills the cycle.
//!
//! `r_m(I − Q_π)` is expanded as `r_m − Σ_k r_m^{k+1} P (r_m^k)*` and `Q_π` as
//! `Σ_k r_m^k P (r_m^k)*`, where `P = Σ_{i<m} r_i r_i*`. Nothing here goes
//! through the strip analysis, so these formulas serve as an independent
//! check on [`crate::functor::functor_apply`].

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{eval, eval_basis, parse, GenFamily, OperatorExpr};
use crate::functor::functor_apply;
use crate::label::{BasisLabel, Scalar, ONE};
use crate::rep::{MonomialRep, Signature};
use crate::series::strip_bound;
use crate::term::{MonomialTerm, VectorSum};

/// Case split for `n = (m−1)·k0 + j0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormCase {
    /// `n < m`.
    CaseI { n: usize, m: usize },
    /// `n ≥ m`, `n = (m−1)·k0 + 1`.
    CaseIIa { n: usize, m: usize, k0: usize },
    /// `n ≥ m`, `n = (m−1)·k0 + j0` with `2 ≤ j0 ≤ m−1`.
    CaseIIb {
        n: usize,
        m: usize,
        k0: usize,
        j0: usize,
    },
}

impl ClosedFormCase {
    pub fn arities(&self) -> (usize, usize) {
        match *self {
            ClosedFormCase::CaseI { n, m }
            | ClosedFormCase::CaseIIa { n, m, .. }
            | ClosedFormCase::CaseIIb { n, m, .. } => (n, m),
        }
    }
}

impl fmt::Display for ClosedFormCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedFormCase::CaseI { n, m } => write!(f, "case i (n={n} < m={m})"),
            ClosedFormCase::CaseIIa { n, m, k0 } => write!(f, "case ii-a (n={n}, m={m}, k0={k0})"),
            ClosedFormCase::CaseIIb { n, m, k0, j0 } => {
                write!(f, "case ii-b (n={n}, m={m}, k0={k0}, j0={j0})")
            }
        }
    }
}

pub fn classify_case(n: usize, m: usize) -> Result<ClosedFormCase> {
    Signature::finite(n)?;
    Signature::finite(m)?;
    if n < m {
        return Ok(ClosedFormCase::CaseI { n, m });
    }
    let step = m - 1;
    if (n - 1).is_multiple_of(step) {
        return Ok(ClosedFormCase::CaseIIa {
            n,
            m,
            k0: (n - 1) / step,
        });
    }
    let j0 = match n % step {
        0 => step,
        r => r,
    };
    Ok(ClosedFormCase::CaseIIb {
        n,
        m,
        k0: (n - j0) / step,
        j0,
    })
}

fn r(i: usize) -> OperatorExpr {
    OperatorExpr::gen(GenFamily::R, i)
}

/// `Σ_{i=1}^{m−p} r_{i+p−1} r_i* + Σ_{i=m−p+1}^{m−1} r_m r_{i+p−m} r_i*`.
fn shift_polynomial(p: usize, m: usize) -> OperatorExpr {
    let mut terms = Vec::new();
    for i in 1..=m - p {
        terms.push((
            ONE,
            OperatorExpr::Product(vec![r(i + p - 1), r(i).adjoint()]),
        ));
    }
    for i in m - p + 1..m {
        terms.push((
            ONE,
            OperatorExpr::Product(vec![r(m), r(i + p - m), r(i).adjoint()]),
        ));
    }
    OperatorExpr::sum(terms)
}

/// The polynomial `A_{n,m}`: uses `n` in case i and `j0` in case ii-b.
pub fn build_a(n: usize, m: usize, j0: Option<usize>) -> Result<OperatorExpr> {
    match (classify_case(n, m)?, j0) {
        (ClosedFormCase::CaseI { .. }, None) => Ok(shift_polynomial(n, m)),
        (ClosedFormCase::CaseIIb { j0: expected, .. }, Some(j0)) if j0 == expected => {
            Ok(shift_polynomial(j0, m))
        }
        (case, j0) => Err(Error::InvalidCase(format!(
            "A_{{n,m}} is not defined for {case} with j0 = {j0:?}"
        ))),
    }
}

/// `P = Σ_{i<m} r_i r_i*`, the range projection of `Q`'s first layer.
fn lower_projection(m: usize) -> OperatorExpr {
    OperatorExpr::sum(
        (1..m)
            .map(|i| (ONE, OperatorExpr::Product(vec![r(i), r(i).adjoint()])))
            .collect(),
    )
}

/// `coeff · Σ_{k≥0} r_m^{k+shift} body (r_m^k)*`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub coeff: Scalar,
    pub shift: usize,
    pub body: OperatorExpr,
}

/// A finite expression plus a list of power series in `r_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesExpr {
    pub m: usize,
    pub finite: Option<OperatorExpr>,
    pub series: Vec<SeriesTerm>,
}

impl fmt::Display for SeriesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if let Some(finite) = &self.finite {
            write!(f, "{finite}")?;
            first = false;
        }
        for t in &self.series {
            let sign = if first { "" } else { " + " };
            write!(
                f,
                "{sign}({}) Σ_k r{}^(k+{}) [{}] (r{}^k)'",
                t.coeff, self.m, t.shift, t.body, self.m
            )?;
            first = false;
        }
        Ok(())
    }
}

impl SeriesExpr {
    /// Evaluates on a basis vector of a representation of `O_m`.
    pub fn eval_basis(&self, rep: &MonomialRep, x: &BasisLabel) -> Result<VectorSum> {
        if rep.signature() != Signature::Finite(self.m) {
            return Err(Error::SignatureMismatch {
                expected: Signature::Finite(self.m),
                found: rep.signature(),
            });
        }
        let mut out = match &self.finite {
            Some(expr) => eval_basis(expr, rep, x, false)?,
            None => VectorSum::new(),
        };
        for term in &self.series {
            out.add_scaled(&self.eval_series(term, rep, x)?, term.coeff);
        }
        Ok(out)
    }

    fn eval_series(
        &self,
        term: &SeriesTerm,
        rep: &MonomialRep,
        x: &BasisLabel,
    ) -> Result<VectorSum> {
        let m = self.m;
        let mut out = VectorSum::new();
        let mut seen: Vec<BasisLabel> = Vec::new();
        let mut tail = MonomialTerm::unit(x.clone());
        let bound = strip_bound();
        for k in 0.. {
            let MonomialTerm::Basis { phase, label } = tail else {
                break;
            };
            if let Some(start) = seen.iter().position(|l| *l == label) {
                for y in &seen[start..] {
                    if !eval_basis(&term.body, rep, y, false)?.is_empty() {
                        return Err(Error::Inconsistent(format!(
                            "series in r{m} does not converge at {x}: [{}] survives on the cycle through {y}",
                            term.body
                        )));
                    }
                }
                break;
            }
            if k >= bound {
                return Err(Error::StripDivergence {
                    label: x.clone(),
                    iterations: bound,
                });
            }
            let mut summand = eval_basis(&term.body, rep, &label, false)?.scaled(phase);
            for _ in 0..k + term.shift {
                summand = apply_generator(rep, m, &summand)?;
            }
            out.add_scaled(&summand, ONE);
            tail = rep.apply_adjoint(m, &label)?;
            seen.push(label);
        }
        Ok(out)
    }
}

fn apply_generator(rep: &MonomialRep, generator: usize, v: &VectorSum) -> Result<VectorSum> {
    let mut out = VectorSum::new();
    for (label, c) in v.iter() {
        out.add_term(&rep.apply(generator, label)?, *c);
    }
    Ok(out)
}

/// `r_m^l r_i` with `j = (m−1)l + i`.
fn embedded_word(m: usize, j: usize) -> OperatorExpr {
    let l = (j - 1) / (m - 1);
    let i = j - (m - 1) * l;
    let mut factors = vec![r(m); l];
    factors.push(r(i));
    OperatorExpr::product(factors)
}

/// The general presentation of `F_{n,m}(π)(s_j)` for the given case.
pub fn closed_generator_expr(case: ClosedFormCase, j: usize) -> Result<SeriesExpr> {
    let (n, m) = case.arities();
    if !(1..=n).contains(&j) {
        return Err(Error::InvalidGenerator {
            index: j,
            signature: Signature::Finite(n),
        });
    }
    if j < n {
        let word = match case {
            ClosedFormCase::CaseI { .. } => r(j),
            _ => embedded_word(m, j),
        };
        return Ok(SeriesExpr {
            m,
            finite: Some(word),
            series: Vec::new(),
        });
    }
    let tail = SeriesTerm {
        coeff: -ONE,
        shift: 1,
        body: lower_projection(m),
    };
    let shifted = match case {
        ClosedFormCase::CaseI { n, m } => SeriesTerm {
            coeff: ONE,
            shift: 0,
            body: shift_polynomial(n, m),
        },
        ClosedFormCase::CaseIIa { k0, .. } => SeriesTerm {
            coeff: ONE,
            shift: k0,
            body: lower_projection(m),
        },
        ClosedFormCase::CaseIIb { k0, j0, m, .. } => SeriesTerm {
            coeff: ONE,
            shift: k0,
            body: shift_polynomial(j0, m),
        },
    };
    Ok(SeriesExpr {
        m,
        finite: Some(r(m)),
        series: vec![tail, shifted],
    })
}

/// `F_{n,m}(π)(s_j) e_x` from the general power-series presentation.
pub fn closed_generator_apply(
    case: ClosedFormCase,
    rep: &MonomialRep,
    j: usize,
    x: &BasisLabel,
) -> Result<MonomialTerm> {
    if rep.is_zero_rep() {
        return Err(Error::ZeroRepresentation);
    }
    closed_generator_expr(case, j)?
        .eval_basis(rep, x)?
        .to_term()
}

/// A hand-expanded presentation of one generator of `F_{n,m}(π)`, written in
/// the expression language.
#[derive(Clone, Copy, Debug)]
pub struct ReferenceDisplay {
    pub name: &'static str,
    pub n: usize,
    pub m: usize,
    pub generator: usize,
    pub finite: &'static str,
    /// `(coeff, shift, body)` triples.
    pub series: &'static [(f64, usize, &'static str)],
    /// Whether the display is expected to agree with the constructive functor.
    pub expected_to_agree: bool,
    pub note: &'static str,
}

impl ReferenceDisplay {
    pub fn to_series(&self) -> Result<SeriesExpr> {
        let series = self
            .series
            .iter()
            .map(|&(coeff, shift, body)| {
                Ok(SeriesTerm {
                    coeff: Scalar::new(coeff, 0.0),
                    shift,
                    body: parse(body)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SeriesExpr {
            m: self.m,
            finite: Some(parse(self.finite)?),
            series,
        })
    }
}

/// Hand-expanded presentations for `(n,m) ∈ {(2,3), (3,2), (3,4), (4,3)}`.
///
/// Generator letters are kept as each display writes them (`s` and `r` swap roles between
/// the displays); only indices matter to the evaluator.
pub const REFERENCE_DISPLAYS: &[ReferenceDisplay] = &[
    ReferenceDisplay {
        name: "F23.s1",
        n: 2,
        m: 3,
        generator: 1,
        finite: "r1",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F23.s2.split",
        n: 2,
        m: 3,
        generator: 2,
        finite: "r3",
        series: &[(-1.0, 1, "r1 r1' + r2 r2'"), (1.0, 0, "r2 r1' + r3 r1 r2'")],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F23.s2.combined",
        n: 2,
        m: 3,
        generator: 2,
        finite: "r3",
        series: &[(1.0, 0, "r2 r1' + r3 (r1 r2' - r1 r1' - r2 r2')")],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F32.r1",
        n: 3,
        m: 2,
        generator: 1,
        finite: "s1",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F32.r2",
        n: 3,
        m: 2,
        generator: 2,
        finite: "s2 s1",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F32.r3.split",
        n: 3,
        m: 2,
        generator: 3,
        finite: "s2",
        series: &[(-1.0, 1, "s1 s1'"), (1.0, 2, "s1 s1'")],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F32.r3.combined",
        n: 3,
        m: 2,
        generator: 3,
        finite: "s2",
        series: &[(1.0, 1, "(s2 - I) s1 s1'")],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F34.r1",
        n: 3,
        m: 4,
        generator: 1,
        finite: "s1",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F34.r2",
        n: 3,
        m: 4,
        generator: 2,
        finite: "s2",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F34.r3.split",
        n: 3,
        m: 4,
        generator: 3,
        finite: "s4",
        series: &[
            (-1.0, 1, "s1 s1' + s2 s2' + s3 s3'"),
            (1.0, 0, "s3 s1' + s4 s1 s2' + s4 s2 s3'"),
        ],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F34.r3.combined",
        n: 3,
        m: 4,
        generator: 3,
        finite: "s4",
        series: &[(1.0, 0, "s3 s1' + s4 (s1 s2' + s2 s3' - I + s4 s4')")],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F43.s1",
        n: 4,
        m: 3,
        generator: 1,
        finite: "r1",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F43.s2",
        n: 4,
        m: 3,
        generator: 2,
        finite: "r2",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F43.s3",
        n: 4,
        m: 3,
        generator: 3,
        finite: "r3 r1",
        series: &[],
        expected_to_agree: true,
        note: "",
    },
    ReferenceDisplay {
        name: "F43.s4.split",
        n: 4,
        m: 3,
        generator: 4,
        finite: "r3",
        series: &[(-1.0, 1, "r1 r1' + r2 r2'"), (1.0, 2, "r2 r1' + r3 r1 r2'")],
        expected_to_agree: false,
        note: "series exponent k+2 is one higher than the k+k0 = k+1 obtained from 4 = 2·1 + 2",
    },
    ReferenceDisplay {
        name: "F43.s4.combined",
        n: 4,
        m: 3,
        generator: 4,
        finite: "r3",
        series: &[(1.0, 1, "r3 r2 r1' + r3 r3 r1 r2' - r1 r1' - r2 r2'")],
        expected_to_agree: false,
        note: "carries the same extra power of r3 as the split form",
    },
];

/// One disagreement between two evaluations of the same generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub label: BasisLabel,
    pub expected: MonomialTerm,
    pub actual: VectorSum,
}

/// Compares a series presentation of generator `j` against `F_{n,m}(π)(s_j)`
/// computed constructively, returning every sample where they differ.
pub fn compare_with_functor(
    n: usize,
    expr: &SeriesExpr,
    j: usize,
    rep: &MonomialRep,
    samples: &[BasisLabel],
) -> Result<Vec<Mismatch>> {
    let image = functor_apply(n, expr.m, rep)?;
    let mut out = Vec::new();
    for x in samples {
        let expected = image.apply(j, x)?;
        let actual = expr.eval_basis(rep, x)?;
        if !actual.approx_eq(&VectorSum::from_term(&expected)) {
            out.push(Mismatch {
                label: x.clone(),
                expected,
                actual,
            });
        }
    }
    Ok(out)
}

/// Evaluates an arbitrary operator expression and collapses the result to a
/// monomial term.
pub fn eval_monomial(
    expr: &OperatorExpr,
    rep: &MonomialRep,
    x: &BasisLabel,
) -> Result<MonomialTerm> {
    eval(expr, rep, &VectorSum::basis(x.clone()))?.to_term()
}
