//! Exact evaluation of the strongly convergent sums
//!
//! ```text
//! R_{π,a} = Σ_{j≥1} π(f_{n,∞}(t_{j+a} t_j*)),   Q_π = R_{π,0},   U_π = π(s_n)(I − Q_π)
//! ```
//!
//! on basis vectors of a monomial representation. The ranges of the
//! isometries `π(f_{n,∞}(t_j))` are mutually orthogonal, and in a monomial
//! representation a basis vector lies in at most one of them. Walking the
//! backward `s_n`-orbit of a label (the "strip") either finds that unique
//! `j` or detects that the orbit cycles inside `range(s_n)` forever, in which
//! case every summand vanishes on that vector.

use std::sync::{Mutex, OnceLock};

use rustc_hash::FxHashMap;

use crate::embedding::apply_subalgebra_generator;
use crate::error::{Error, Result};
use crate::label::{BasisLabel, Scalar, ONE};
use crate::rep::{MonomialRep, Signature};
use crate::term::MonomialTerm;

pub const DEFAULT_STRIP_ITERS: usize = 10_000;

/// Strip bound, overridable through `MFL_MAX_STRIP_ITERS`.
pub fn strip_bound() -> usize {
    static BOUND: OnceLock<usize> = OnceLock::new();
    *BOUND.get_or_init(|| {
        std::env::var("MFL_MAX_STRIP_ITERS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_STRIP_ITERS)
    })
}

/// Where a basis vector sits in `ℋ = (I−Q)ℋ ⊕ ⊕_j π(f_{n,∞}(t_j))ℋ`.
#[derive(Clone, Debug, PartialEq)]
pub enum StripResult {
    /// `e_x = phase · π(f_{n,∞}(t_j)) e_base`.
    InRange {
        j: usize,
        phase: Scalar,
        base: BasisLabel,
    },
    /// The backward `s_n`-orbit never leaves `range(s_n)`.
    InfiniteTail,
    /// `O_∞` only: the label is in no generator's range.
    NotInAnyRange,
}

impl StripResult {
    pub fn is_in_range(&self) -> bool {
        matches!(self, StripResult::InRange { .. })
    }
}

/// Strip results already computed for one representation, keyed by label.
///
/// Filled with every label on a walked orbit, so later walks stop at the
/// first label seen before.
#[derive(Default)]
pub(crate) struct StripMemo {
    entries: Mutex<FxHashMap<BasisLabel, StripResult>>,
}

impl StripMemo {
    const CAPACITY: usize = 1 << 18;

    fn get(&self, x: &BasisLabel) -> Option<StripResult> {
        self.entries.lock().ok()?.get(x).cloned()
    }

    fn extend(&self, results: impl IntoIterator<Item = (BasisLabel, StripResult)>) {
        if let Ok(mut map) = self.entries.lock() {
            if map.len() > Self::CAPACITY {
                map.clear();
            }
            map.extend(results);
        }
    }
}

/// [`strip_classify_bounded`] with the configured bound, memoized per representation.
pub fn strip_classify(rep: &MonomialRep, x: &BasisLabel) -> Result<StripResult> {
    if let Some(hit) = rep.strip_memo().get(x) {
        return Ok(hit);
    }
    strip_walk(rep, x, strip_bound(), true)
}

pub fn strip_classify_bounded(
    rep: &MonomialRep,
    x: &BasisLabel,
    bound: usize,
) -> Result<StripResult> {
    strip_walk(rep, x, bound, false)
}

fn strip_walk(
    rep: &MonomialRep,
    x: &BasisLabel,
    bound: usize,
    memoize: bool,
) -> Result<StripResult> {
    if rep.is_zero_rep() {
        return Err(Error::ZeroRepresentation);
    }
    let n = match rep.signature() {
        Signature::Infinity => {
            return Ok(match rep.range_decode(x)? {
                None => StripResult::NotInAnyRange,
                Some(d) => StripResult::InRange {
                    j: d.generator,
                    phase: d.phase,
                    base: d.pre,
                },
            });
        }
        Signature::Finite(n) => n,
    };

    // Labels left through s_n so far, with the phase picked up at each; only
    // kept when the results are memoized.
    let mut chain: Vec<(BasisLabel, Scalar)> = Vec::new();
    let mut steps = 0;
    let mut phase = ONE;
    let mut current = x.clone();
    // Brent's cycle detection: compare against a checkpoint that moves
    // forward at power-of-two intervals.
    let mut checkpoint = x.clone();
    let (mut power, mut lam) = (1usize, 0usize);
    let mut terminal = None;
    let outcome = loop {
        if steps >= bound {
            return Err(Error::StripDivergence {
                label: x.clone(),
                iterations: bound,
            });
        }
        if memoize && steps > 0 {
            if let Some(hit) = rep.strip_memo().get(&current) {
                break hit;
            }
        }
        let d = rep.range_decode(&current)?.ok_or_else(|| {
            Error::Inconsistent(format!(
                "{current} lies in no generator range of {}",
                rep.describe()
            ))
        })?;
        if d.generator < n {
            terminal = Some(current);
            break StripResult::InRange {
                j: d.generator,
                phase: d.phase,
                base: d.pre,
            };
        }
        steps += 1;
        phase *= d.phase;
        if memoize {
            chain.push((current, d.phase));
        }
        current = d.pre;
        if current == checkpoint {
            break StripResult::InfiniteTail;
        }
        lam += 1;
        if lam == power {
            checkpoint = current.clone();
            power *= 2;
            lam = 0;
        }
    };

    let answer = match &outcome {
        StripResult::InRange {
            j,
            phase: last,
            base,
        } => StripResult::InRange {
            j: (n - 1) * steps + j,
            phase: phase * last,
            base: base.clone(),
        },
        other => other.clone(),
    };
    if memoize {
        // Each s_n step back adds n−1 to the index.
        let mut results = Vec::with_capacity(chain.len() + 1);
        if let Some(label) = terminal {
            results.push((label, outcome.clone()));
        }
        let mut acc = outcome;
        for (label, step) in chain.into_iter().rev() {
            if let StripResult::InRange { j, phase, base } = acc {
                acc = StripResult::InRange {
                    j: j + n - 1,
                    phase: phase * step,
                    base,
                };
            }
            results.push((label, acc.clone()));
        }
        rep.strip_memo().extend(results);
    }
    Ok(answer)
}

/// `Q_π e_x`: `e_x` when the strip lands in some `range(f(t_j))`, else zero.
pub fn apply_q(rep: &MonomialRep, x: &BasisLabel) -> Result<MonomialTerm> {
    Ok(match strip_classify(rep, x)? {
        StripResult::InRange { .. } => MonomialTerm::unit(x.clone()),
        _ => MonomialTerm::Zero,
    })
}

/// `R_{π,a} e_x` or `R_{π,a}* e_x`; at most one summand of the series is non-zero.
pub fn apply_r(rep: &MonomialRep, a: usize, x: &BasisLabel, adjoint: bool) -> Result<MonomialTerm> {
    match strip_classify(rep, x)? {
        StripResult::InRange { j, phase, base } => {
            let target = if adjoint {
                if j <= a {
                    return Ok(MonomialTerm::Zero);
                }
                j - a
            } else {
                j + a
            };
            Ok(apply_subalgebra_generator(rep, target, &base, false)?.scaled(phase))
        }
        _ => Ok(MonomialTerm::Zero),
    }
}

/// `U_π = π(s_n)(I − Q_π)` or its adjoint `(I − Q_π) π(s_n)*`.
pub fn apply_u(rep: &MonomialRep, x: &BasisLabel, adjoint: bool) -> Result<MonomialTerm> {
    let n = rep.signature().require_finite()?;
    if adjoint {
        let v = rep.apply_adjoint(n, x)?;
        match v.label() {
            Some(y) if apply_q(rep, y)?.is_zero() => Ok(v),
            _ => Ok(MonomialTerm::Zero),
        }
    } else if apply_q(rep, x)?.is_zero() {
        rep.apply(n, x)
    } else {
        Ok(MonomialTerm::Zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{
        make_cycle_rep, make_free_infinity_rep, make_standard_rep, make_zero_rep,
    };
    use crate::rep::{Decoded, RepAction};

    fn omega() -> BasisLabel {
        BasisLabel::omega()
    }

    #[test]
    fn strip_examples() {
        let cyc = make_cycle_rep(2, 2, ONE).unwrap();
        assert_eq!(
            strip_classify(&cyc, &omega()).unwrap(),
            StripResult::InfiniteTail
        );
        let cyc3 = make_cycle_rep(3, 3, ONE).unwrap();
        assert_eq!(
            strip_classify(&cyc3, &BasisLabel::word(&[3, 1])).unwrap(),
            StripResult::InRange {
                j: 3,
                phase: ONE,
                base: omega()
            }
        );
        let std2 = make_standard_rep(2).unwrap();
        assert_eq!(
            strip_classify(&std2, &BasisLabel::Int(0)).unwrap(),
            StripResult::InRange {
                j: 1,
                phase: ONE,
                base: BasisLabel::Int(0)
            }
        );
    }

    #[test]
    fn strip_accumulates_cycle_phases() {
        // [2,2,1] = s_2 s_2 s_1 Ω, so j = 2 + 1 = 3 and the phase is 1
        let cyc = make_cycle_rep(2, 2, -ONE).unwrap();
        assert_eq!(
            strip_classify(&cyc, &BasisLabel::word(&[2, 2, 1])).unwrap(),
            StripResult::InRange {
                j: 3,
                phase: ONE,
                base: omega()
            }
        );
        // s_1 Ω under c = 1: [2] = s_2 Ω ... strip walks s_2^k only, and s_1 Ω = λΩ
        let c1 = make_cycle_rep(2, 1, crate::label::I).unwrap();
        assert_eq!(
            strip_classify(&c1, &omega()).unwrap(),
            StripResult::InRange {
                j: 1,
                phase: -crate::label::I,
                base: omega()
            }
        );
    }

    #[test]
    fn strip_on_infinity_reps() {
        let free = make_free_infinity_rep();
        assert_eq!(
            strip_classify(&free, &omega()).unwrap(),
            StripResult::NotInAnyRange
        );
        assert_eq!(
            strip_classify(&free, &BasisLabel::word(&[7, 2])).unwrap(),
            StripResult::InRange {
                j: 7,
                phase: ONE,
                base: BasisLabel::word(&[2])
            }
        );
    }

    /// `s_n e_x = e_{x+1}` on ℤ-labels with `s_1` elsewhere: every backward
    /// `s_n`-orbit is infinite and never repeats.
    struct Runaway;

    impl RepAction for Runaway {
        fn signature(&self) -> Signature {
            Signature::Finite(2)
        }
        fn apply(&self, _: usize, _: &BasisLabel) -> Result<MonomialTerm> {
            unimplemented!()
        }
        fn apply_adjoint(&self, _: usize, _: &BasisLabel) -> Result<MonomialTerm> {
            unimplemented!()
        }
        fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
            let BasisLabel::Int(v) = x else {
                unreachable!()
            };
            Ok(Some(Decoded {
                generator: 2,
                phase: ONE,
                pre: BasisLabel::Int(v + 1),
            }))
        }
        fn labels(&self, _: usize) -> Vec<BasisLabel> {
            vec![BasisLabel::Int(0)]
        }
        fn contains(&self, _: &BasisLabel) -> bool {
            true
        }
        fn describe(&self) -> String {
            "runaway".into()
        }
    }

    #[test]
    fn divergent_strip_is_reported() {
        let rep = MonomialRep::new(Runaway);
        assert_eq!(
            strip_classify_bounded(&rep, &BasisLabel::Int(0), 100).unwrap_err(),
            Error::StripDivergence {
                label: BasisLabel::Int(0),
                iterations: 100
            }
        );
        assert!(matches!(
            strip_classify(&rep, &BasisLabel::Int(0)),
            Err(Error::StripDivergence {
                iterations: DEFAULT_STRIP_ITERS,
                ..
            })
        ));
    }

    #[test]
    fn zero_rep_is_rejected() {
        let zero = make_zero_rep(Signature::Finite(2));
        assert_eq!(
            strip_classify(&zero, &omega()).unwrap_err(),
            Error::ZeroRepresentation
        );
    }

    #[test]
    fn q_examples() {
        let std2 = make_standard_rep(2).unwrap();
        for x in std2.labels(5) {
            assert_eq!(apply_q(&std2, &x).unwrap(), MonomialTerm::unit(x.clone()));
        }
        let minus = make_cycle_rep(2, 2, -ONE).unwrap();
        assert_eq!(apply_q(&minus, &omega()).unwrap(), MonomialTerm::Zero);
        assert_eq!(
            apply_q(&minus, &BasisLabel::word(&[1])).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[1]))
        );
    }

    #[test]
    fn r_examples() {
        let std2 = make_standard_rep(2).unwrap();
        assert_eq!(
            apply_r(&std2, 1, &BasisLabel::Int(0), false).unwrap(),
            MonomialTerm::unit(BasisLabel::Int(1))
        );
        for x in std2.labels(4) {
            assert_eq!(
                apply_r(&std2, 0, &x, false).unwrap(),
                MonomialTerm::unit(x.clone())
            );
        }
        let plus = make_cycle_rep(2, 2, ONE).unwrap();
        assert_eq!(
            apply_r(&plus, 3, &omega(), false).unwrap(),
            MonomialTerm::Zero
        );
        // R_1* e_1 = e_0 on std2, and R_1* kills the j = 1 range
        assert_eq!(
            apply_r(&std2, 1, &BasisLabel::Int(1), true).unwrap(),
            MonomialTerm::unit(BasisLabel::Int(0))
        );
        assert_eq!(
            apply_r(&std2, 1, &BasisLabel::Int(0), true).unwrap(),
            MonomialTerm::Zero
        );
    }

    #[test]
    fn u_examples() {
        let minus = make_cycle_rep(2, 2, -ONE).unwrap();
        assert_eq!(
            apply_u(&minus, &omega(), false).unwrap(),
            MonomialTerm::new(-ONE, omega())
        );
        assert_eq!(
            apply_u(&minus, &omega(), true).unwrap(),
            MonomialTerm::new(-ONE, omega())
        );
        let std2 = make_standard_rep(2).unwrap();
        for x in std2.labels(4) {
            assert_eq!(apply_u(&std2, &x, false).unwrap(), MonomialTerm::Zero);
        }
        let cyc3 = make_cycle_rep(3, 3, ONE).unwrap();
        assert_eq!(
            apply_u(&cyc3, &BasisLabel::word(&[1]), false).unwrap(),
            MonomialTerm::Zero
        );
        assert_eq!(
            apply_u(&make_free_infinity_rep(), &omega(), false).unwrap_err(),
            Error::WrongSignature(Signature::Infinity)
        );
    }
}
