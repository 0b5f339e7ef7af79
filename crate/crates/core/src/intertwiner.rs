//! Monomial intertwiners `T ∈ Mor(π₁, π₂)` and their sampled verification.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::label::BasisLabel;
use crate::rep::MonomialRep;
use crate::term::MonomialTerm;

type LabelMap = dyn Fn(&BasisLabel) -> Result<MonomialTerm> + Send + Sync;

/// A monomial operator between two representation spaces.
#[derive(Clone)]
pub struct IntertwinerMap {
    pub source: MonomialRep,
    pub target: MonomialRep,
    pub name: String,
    action: Arc<LabelMap>,
}

/// First sample at which `T π₁(x) = π₂(x) T` fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub label: BasisLabel,
    pub generator: usize,
    pub adjoint: bool,
    pub expected: MonomialTerm,
    pub actual: MonomialTerm,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let star = if self.adjoint { "*" } else { "" };
        write!(
            f,
            "at {} with s_{}{}: π₂(x)T gives {}, Tπ₁(x) gives {}",
            self.label, self.generator, star, self.expected, self.actual
        )
    }
}

impl IntertwinerMap {
    pub fn new<F>(
        name: impl Into<String>,
        source: MonomialRep,
        target: MonomialRep,
        action: F,
    ) -> Self
    where
        F: Fn(&BasisLabel) -> Result<MonomialTerm> + Send + Sync + 'static,
    {
        IntertwinerMap {
            source,
            target,
            name: name.into(),
            action: Arc::new(action),
        }
    }

    pub fn identity(rep: MonomialRep) -> Self {
        Self::new("identity", rep.clone(), rep, |x| {
            Ok(MonomialTerm::unit(x.clone()))
        })
    }

    pub fn zero(source: MonomialRep, target: MonomialRep) -> Self {
        Self::new("zero", source, target, |_| Ok(MonomialTerm::Zero))
    }

    /// `e_x ↦ e_{Pair(branch, x)}` into a direct sum.
    pub fn inclusion(source: MonomialRep, sum: MonomialRep, branch: u32) -> Self {
        Self::new(format!("inclusion[{branch}]"), source, sum, move |x| {
            Ok(MonomialTerm::unit(BasisLabel::pair(branch, x.clone())))
        })
    }

    /// `e_{Pair(branch, x)} ↦ e_x`, other blocks to zero.
    pub fn projection(sum: MonomialRep, target: MonomialRep, branch: u32) -> Self {
        Self::new(
            format!("projection[{branch}]"),
            sum,
            target,
            move |x| match x {
                BasisLabel::Pair(b, inner) if *b == branch => {
                    Ok(MonomialTerm::unit((**inner).clone()))
                }
                BasisLabel::Pair(..) => Ok(MonomialTerm::Zero),
                other => Err(Error::ForeignLabel(other.clone())),
            },
        )
    }

    /// Same underlying label map between different representations.
    pub fn retarget(&self, source: MonomialRep, target: MonomialRep) -> Self {
        IntertwinerMap {
            source,
            target,
            name: self.name.clone(),
            action: Arc::clone(&self.action),
        }
    }

    pub fn apply(&self, x: &BasisLabel) -> Result<MonomialTerm> {
        (self.action)(x)
    }

    pub fn apply_term(&self, term: MonomialTerm) -> Result<MonomialTerm> {
        term.then(|x| self.apply(x))
    }
}

impl fmt::Debug for IntertwinerMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntertwinerMap")
            .field("name", &self.name)
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

/// Finds the first sample where `T` fails to commute with a generator or its
/// adjoint. Generators are probed up to `n`, or up to `j_bound` for `O_∞`.
pub fn intertwiner_violation(
    map: &IntertwinerMap,
    samples: &[BasisLabel],
    j_bound: usize,
) -> Result<Option<Violation>> {
    let signature = map.source.signature();
    if signature != map.target.signature() {
        return Err(Error::SignatureMismatch {
            expected: signature,
            found: map.target.signature(),
        });
    }
    let bound = signature.generator_bound(j_bound);
    for x in samples {
        let image = map.apply(x)?;
        for generator in 1..=bound {
            for adjoint in [false, true] {
                let before = if adjoint {
                    map.source.apply_adjoint(generator, x)?
                } else {
                    map.source.apply(generator, x)?
                };
                let actual = map.apply_term(before)?;
                let expected = map.target.apply_term(generator, adjoint, image.clone())?;
                if !actual.approx_eq(&expected) {
                    return Ok(Some(Violation {
                        label: x.clone(),
                        generator,
                        adjoint,
                        expected,
                        actual,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// `true` iff `T ∈ Mor(π₁, π₂)` on every sample; empty samples pass vacuously.
pub fn check_intertwiner(
    map: &IntertwinerMap,
    samples: &[BasisLabel],
    j_bound: usize,
) -> Result<bool> {
    Ok(intertwiner_violation(map, samples, j_bound)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{direct_sum, make_cycle_rep, make_standard_rep};
    use crate::label::ONE;

    #[test]
    fn identity_and_inclusion_intertwine() {
        let std2 = make_standard_rep(2).unwrap();
        let cyc = make_cycle_rep(2, 2, -ONE).unwrap();
        let sum = direct_sum(&[std2.clone(), cyc]).unwrap();
        assert!(
            check_intertwiner(&IntertwinerMap::identity(std2.clone()), &std2.labels(4), 12)
                .unwrap()
        );
        let incl = IntertwinerMap::inclusion(std2.clone(), sum.clone(), 0);
        assert!(check_intertwiner(&incl, &std2.labels(4), 12).unwrap());
        let proj = IntertwinerMap::projection(sum.clone(), std2.clone(), 0);
        assert!(check_intertwiner(&proj, &sum.labels(3), 12).unwrap());
    }

    #[test]
    fn shift_map_is_not_an_intertwiner() {
        let std2 = make_standard_rep(2).unwrap();
        let shift = IntertwinerMap::new("shift", std2.clone(), std2.clone(), |x| match x {
            BasisLabel::Int(v) => Ok(MonomialTerm::unit(BasisLabel::Int(v + 1))),
            other => Err(Error::ForeignLabel(other.clone())),
        });
        let v = intertwiner_violation(&shift, &[BasisLabel::Int(0)], 12)
            .unwrap()
            .unwrap();
        // s_1 e_0 = e_0 ↦ e_1, but s_1 e_1 = e_2
        assert_eq!(v.generator, 1);
        assert!(!v.adjoint);
        assert_eq!(v.actual, MonomialTerm::unit(BasisLabel::Int(1)));
        assert_eq!(v.expected, MonomialTerm::unit(BasisLabel::Int(2)));
    }

    #[test]
    fn empty_samples_are_vacuous() {
        let std2 = make_standard_rep(2).unwrap();
        assert!(check_intertwiner(&IntertwinerMap::zero(std2.clone(), std2), &[], 12).unwrap());
    }
}
