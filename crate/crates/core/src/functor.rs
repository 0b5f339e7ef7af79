//! Functors between the representation categories of `O_n`, `O_m` and `O_∞`.
//!
//! Every functor keeps the representation space and acts as the identity on
//! morphisms; only the generator actions change.
//!
//! * `F_{n,m}`: `Rep O_m → Rep O_n`, with `π'(s_i) = π(f_{m,∞}(t_i))` for
//!   `i < n` and `π'(s_n) = π(r_m)(I − Q_π) + R_{π,n−1}`.
//! * `F_{∞,n}`: restriction along `f_{n,∞}`.
//! * `F_{n,∞}`: the unmagnifying extension, with
//!   `π'(s_n) = I − Σ_j π(t_j t_j*) + Σ_j π(t_{j+n−1} t_j*)`.

use std::fmt;

use crate::builtin::make_zero_rep;
use crate::embedding::apply_embedded;
use crate::error::{Error, Result};
use crate::intertwiner::{intertwiner_violation, IntertwinerMap};
use crate::label::{BasisLabel, ONE};
use crate::rep::{Decoded, MonomialRep, RepAction, Signature};
use crate::series::{apply_q, strip_classify, StripResult};
use crate::term::MonomialTerm;

/// A functor `Rep(source) → Rep(target)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctorSpec {
    pub target: Signature,
    pub source: Signature,
}

impl FunctorSpec {
    pub fn new(target: Signature, source: Signature) -> Self {
        FunctorSpec { target, source }
    }

    pub fn apply(&self, rep: &MonomialRep) -> Result<MonomialRep> {
        if rep.signature() != self.source {
            return Err(Error::SignatureMismatch {
                expected: self.source,
                found: rep.signature(),
            });
        }
        match (self.target, self.source) {
            (Signature::Finite(n), Signature::Finite(m)) => functor_apply(n, m, rep),
            (Signature::Infinity, Signature::Finite(n)) => functor_restrict(n, rep),
            (Signature::Finite(n), Signature::Infinity) => functor_extend(n, rep),
            (Signature::Infinity, Signature::Infinity) => Ok(rep.clone()),
        }
    }
}

impl fmt::Display for FunctorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: Signature| s.arity().map_or("inf".to_string(), |n| n.to_string());
        write!(f, "F[{},{}]", show(self.target), show(self.source))
    }
}

fn expect_signature(rep: &MonomialRep, expected: Signature) -> Result<()> {
    if rep.signature() == expected {
        Ok(())
    } else {
        Err(Error::SignatureMismatch {
            expected,
            found: rep.signature(),
        })
    }
}

/// `F_{n,m}(π)` for a representation `π` of `O_m`.
pub fn functor_apply(n: usize, m: usize, rep: &MonomialRep) -> Result<MonomialRep> {
    let target = Signature::finite(n)?;
    expect_signature(rep, Signature::finite(m)?)?;
    if rep.is_zero_rep() {
        return Ok(make_zero_rep(target));
    }
    Ok(MonomialRep::new(FiniteImage {
        n,
        m,
        source: rep.clone(),
    }))
}

struct FiniteImage {
    n: usize,
    m: usize,
    source: MonomialRep,
}

impl RepAction for FiniteImage {
    fn signature(&self) -> Signature {
        Signature::Finite(self.n)
    }

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        if generator < self.n {
            return apply_embedded(&self.source, generator, x, false);
        }
        match strip_classify(&self.source, x)? {
            StripResult::InRange { j, phase, base } => {
                Ok(apply_embedded(&self.source, j + self.n - 1, &base, false)?.scaled(phase))
            }
            _ => self.source.apply(self.m, x),
        }
    }

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        if generator < self.n {
            return apply_embedded(&self.source, generator, x, true);
        }
        let v = self.source.apply_adjoint(self.m, x)?;
        let through_tail = match v.label() {
            Some(y) if apply_q(&self.source, y)?.is_zero() => v,
            _ => MonomialTerm::Zero,
        };
        let through_shift = match strip_classify(&self.source, x)? {
            StripResult::InRange { j, phase, base } if j >= self.n => {
                apply_embedded(&self.source, j - self.n + 1, &base, false)?.scaled(phase)
            }
            _ => MonomialTerm::Zero,
        };
        match (through_tail.is_zero(), through_shift.is_zero()) {
            (false, false) => Err(Error::Inconsistent(format!(
                "both branches of s_{}* are non-zero at {x}",
                self.n
            ))),
            (true, _) => Ok(through_shift),
            (false, true) => Ok(through_tail),
        }
    }

    /// Read off the source strip: `f(t_j) e_b` with `j < n` is in `range(s_j)`,
    /// with `j ≥ n` it is `π'(s_n) f(t_{j−n+1}) e_b`, and a tail vector is
    /// `π(r_m)` of another tail vector.
    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        match strip_classify(&self.source, x)? {
            StripResult::InRange { j, phase, base } if j < self.n => Ok(Some(Decoded {
                generator: j,
                phase,
                pre: base,
            })),
            StripResult::InRange { j, phase, base } => {
                match apply_embedded(&self.source, j + 1 - self.n, &base, false)? {
                    MonomialTerm::Basis {
                        phase: inner,
                        label,
                    } => Ok(Some(Decoded {
                        generator: self.n,
                        phase: phase * inner,
                        pre: label,
                    })),
                    MonomialTerm::Zero => {
                        Err(Error::Inconsistent(format!("isometry killed {base}")))
                    }
                }
            }
            _ => match self.source.range_decode(x)? {
                Some(d) if d.generator == self.m => Ok(Some(Decoded {
                    generator: self.n,
                    ..d
                })),
                _ => Err(Error::Inconsistent(format!(
                    "tail vector {x} is not in range(s_{})",
                    self.m
                ))),
            },
        }
    }

    fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        self.source.labels(depth)
    }

    fn contains(&self, x: &BasisLabel) -> bool {
        self.source.contains(x)
    }

    fn describe(&self) -> String {
        format!("F[{},{}]({})", self.n, self.m, self.source.describe())
    }
}

/// `F_{∞,n}(π) = π ∘ f_{n,∞}`.
pub fn functor_restrict(n: usize, rep: &MonomialRep) -> Result<MonomialRep> {
    expect_signature(rep, Signature::finite(n)?)?;
    if rep.is_zero_rep() {
        return Ok(make_zero_rep(Signature::Infinity));
    }
    Ok(MonomialRep::new(Restriction {
        n,
        source: rep.clone(),
    }))
}

struct Restriction {
    n: usize,
    source: MonomialRep,
}

impl RepAction for Restriction {
    fn signature(&self) -> Signature {
        Signature::Infinity
    }

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        apply_embedded(&self.source, generator, x, false)
    }

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        apply_embedded(&self.source, generator, x, true)
    }

    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        Ok(match strip_classify(&self.source, x)? {
            StripResult::InRange { j, phase, base } => Some(Decoded {
                generator: j,
                phase,
                pre: base,
            }),
            _ => None,
        })
    }

    fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        self.source.labels(depth)
    }

    fn contains(&self, x: &BasisLabel) -> bool {
        self.source.contains(x)
    }

    fn describe(&self) -> String {
        format!("Finf[{}]({})", self.n, self.source.describe())
    }
}

/// Unmagnifying extension `F_{n,∞}(π)` of a representation of `O_∞`.
pub fn functor_extend(n: usize, rep: &MonomialRep) -> Result<MonomialRep> {
    let target = Signature::finite(n)?;
    expect_signature(rep, Signature::Infinity)?;
    if rep.is_zero_rep() {
        return Ok(make_zero_rep(target));
    }
    Ok(MonomialRep::new(Extension {
        n,
        source: rep.clone(),
    }))
}

struct Extension {
    n: usize,
    source: MonomialRep,
}

impl RepAction for Extension {
    fn signature(&self) -> Signature {
        Signature::Finite(self.n)
    }

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        if generator < self.n {
            return self.source.apply(generator, x);
        }
        match self.source.range_decode(x)? {
            Some(d) => Ok(self
                .source
                .apply(d.generator + self.n - 1, &d.pre)?
                .scaled(d.phase)),
            None => Ok(MonomialTerm::unit(x.clone())),
        }
    }

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        if generator < self.n {
            return self.source.apply_adjoint(generator, x);
        }
        match self.source.range_decode(x)? {
            Some(d) if d.generator >= self.n => Ok(self
                .source
                .apply(d.generator - self.n + 1, &d.pre)?
                .scaled(d.phase)),
            Some(_) => Ok(MonomialTerm::Zero),
            None => Ok(MonomialTerm::unit(x.clone())),
        }
    }

    /// Vectors outside every `range(t_j)` are fixed by `s_n`; `t_j e_b` with
    /// `j ≥ n` is `π'(s_n) t_{j−n+1} e_b`.
    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        match self.source.range_decode(x)? {
            None => Ok(Some(Decoded {
                generator: self.n,
                phase: ONE,
                pre: x.clone(),
            })),
            Some(d) if d.generator < self.n => Ok(Some(d)),
            Some(d) => match self.source.apply(d.generator + 1 - self.n, &d.pre)? {
                MonomialTerm::Basis { phase, label } => Ok(Some(Decoded {
                    generator: self.n,
                    phase: d.phase * phase,
                    pre: label,
                })),
                MonomialTerm::Zero => {
                    Err(Error::Inconsistent(format!("isometry killed {}", d.pre)))
                }
            },
        }
    }

    fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        self.source.labels(depth)
    }

    fn contains(&self, x: &BasisLabel) -> bool {
        self.source.contains(x)
    }

    fn describe(&self) -> String {
        format!("Fext[{}]({})", self.n, self.source.describe())
    }
}

/// Image of an intertwiner: the same label map between the image representations.
///
/// `samples` are source-space labels on which `T` is first checked to lie in
/// `Mor(π₁, π₂)`; `j_bound` limits the `O_∞` generators probed.
pub fn functor_morphism(
    spec: FunctorSpec,
    map: &IntertwinerMap,
    samples: &[BasisLabel],
    j_bound: usize,
) -> Result<IntertwinerMap> {
    if let Some(v) = intertwiner_violation(map, samples, j_bound)? {
        return Err(Error::NotAMorphism(format!("{}: {v}", map.name)));
    }
    let source = spec.apply(&map.source)?;
    let target = spec.apply(&map.target)?;
    Ok(map.retarget(source, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{direct_sum, make_cycle_rep, make_free_infinity_rep, make_standard_rep};
    use crate::intertwiner::check_intertwiner;

    fn omega() -> BasisLabel {
        BasisLabel::omega()
    }

    /// Finds the unique generator whose adjoint does not kill `e_x`.
    fn decode_by_probing(rep: &MonomialRep, n: usize, x: &BasisLabel) -> Result<Option<Decoded>> {
        let mut found = None;
        for generator in 1..=n {
            if let MonomialTerm::Basis { phase, label } = rep.apply_adjoint(generator, x)? {
                if found.is_some() {
                    return Err(Error::Inconsistent(format!(
                        "{x} lies in two generator ranges"
                    )));
                }
                found = Some(Decoded {
                    generator,
                    phase,
                    pre: label,
                });
            }
        }
        Ok(found)
    }

    #[test]
    fn direct_decode_matches_probing() {
        let reps = [
            functor_apply(3, 2, &make_standard_rep(2).unwrap()).unwrap(),
            functor_apply(2, 4, &make_cycle_rep(4, 4, -ONE).unwrap()).unwrap(),
            functor_apply(5, 3, &make_cycle_rep(3, 1, ONE).unwrap()).unwrap(),
            functor_apply(
                4,
                2,
                &functor_apply(2, 3, &make_cycle_rep(3, 3, crate::label::I).unwrap()).unwrap(),
            )
            .unwrap(),
            functor_extend(3, &make_free_infinity_rep()).unwrap(),
            functor_extend(
                2,
                &functor_restrict(3, &make_cycle_rep(3, 3, -ONE).unwrap()).unwrap(),
            )
            .unwrap(),
        ];
        for rep in &reps {
            let n = rep.signature().require_finite().unwrap();
            for x in rep.labels(3) {
                let direct = rep.range_decode(&x).unwrap().unwrap();
                let probed = decode_by_probing(rep, n, &x).unwrap().unwrap();
                assert_eq!(direct.generator, probed.generator, "{rep} at {x}");
                assert_eq!(direct.pre, probed.pre, "{rep} at {x}");
                assert!(
                    crate::label::approx_eq(direct.phase, probed.phase),
                    "{rep} at {x}"
                );
            }
        }
    }

    #[test]
    fn f32_on_standard_rep_squares_s2() {
        let std2 = make_standard_rep(2).unwrap();
        let image = functor_apply(3, 2, &std2).unwrap();
        assert_eq!(
            image.apply(3, &BasisLabel::Int(0)).unwrap(),
            MonomialTerm::unit(BasisLabel::Int(3))
        );
        for x in std2.labels(4) {
            let squared = std2
                .apply_term(2, false, std2.apply(2, &x).unwrap())
                .unwrap();
            assert_eq!(image.apply(3, &x).unwrap(), squared);
        }
        assert_eq!(image.describe(), "F[3,2](std:2)");
    }

    #[test]
    fn f32_on_cuntz_state_keeps_eigenphase() {
        let minus = make_cycle_rep(2, 2, -ONE).unwrap();
        let image = functor_apply(3, 2, &minus).unwrap();
        assert_eq!(
            image.apply(3, &omega()).unwrap(),
            MonomialTerm::new(-ONE, omega())
        );
        assert_eq!(
            image.apply_adjoint(3, &omega()).unwrap(),
            MonomialTerm::new(-ONE, omega())
        );
    }

    #[test]
    fn diagonal_functor_is_identity() {
        for rep in [
            make_standard_rep(3).unwrap(),
            make_cycle_rep(3, 3, crate::label::I).unwrap(),
            make_cycle_rep(3, 1, -ONE).unwrap(),
        ] {
            let image = functor_apply(3, 3, &rep).unwrap();
            for x in rep.labels(4) {
                for g in 1..=3 {
                    assert!(image
                        .apply(g, &x)
                        .unwrap()
                        .approx_eq(&rep.apply(g, &x).unwrap()));
                    assert!(image
                        .apply_adjoint(g, &x)
                        .unwrap()
                        .approx_eq(&rep.apply_adjoint(g, &x).unwrap()));
                }
            }
        }
    }

    #[test]
    fn restriction_forgets_the_eigenphase() {
        let plus = functor_restrict(2, &make_cycle_rep(2, 2, ONE).unwrap()).unwrap();
        let minus = functor_restrict(2, &make_cycle_rep(2, 2, -ONE).unwrap()).unwrap();
        assert_eq!(
            plus.apply(1, &omega()).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[1]))
        );
        assert_eq!(
            plus.apply(2, &omega()).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[2, 1]))
        );
        for j in 1..=8 {
            assert_eq!(
                minus.apply_adjoint(j, &omega()).unwrap(),
                MonomialTerm::Zero
            );
            assert_eq!(
                plus.apply(j, &omega()).unwrap(),
                minus.apply(j, &omega()).unwrap()
            );
        }
        assert_eq!(plus.range_decode(&omega()).unwrap(), None);
    }

    #[test]
    fn extension_examples() {
        let ext = functor_extend(2, &make_free_infinity_rep()).unwrap();
        assert_eq!(ext.apply(2, &omega()).unwrap(), MonomialTerm::unit(omega()));
        assert_eq!(
            ext.apply(2, &BasisLabel::word(&[3])).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[4]))
        );
        assert_eq!(
            ext.apply_adjoint(2, &BasisLabel::word(&[4])).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[3]))
        );
        assert_eq!(
            ext.apply_adjoint(2, &BasisLabel::word(&[1])).unwrap(),
            MonomialTerm::Zero
        );
    }

    #[test]
    fn extension_then_restriction_is_identity() {
        let free = make_free_infinity_rep();
        for n in 2..=5 {
            let back = functor_restrict(n, &functor_extend(n, &free).unwrap()).unwrap();
            for x in free.labels(3) {
                for j in 1..=12 {
                    assert_eq!(back.apply(j, &x).unwrap(), free.apply(j, &x).unwrap());
                    assert_eq!(
                        back.apply_adjoint(j, &x).unwrap(),
                        free.apply_adjoint(j, &x).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let zero = make_zero_rep(Signature::Finite(3));
        assert!(functor_apply(2, 3, &zero).unwrap().is_zero_rep());
        assert!(functor_restrict(3, &zero).unwrap().is_zero_rep());
        assert!(functor_extend(4, &make_zero_rep(Signature::Infinity))
            .unwrap()
            .is_zero_rep());
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let std2 = make_standard_rep(2).unwrap();
        assert!(matches!(
            functor_apply(3, 4, &std2),
            Err(Error::SignatureMismatch { .. })
        ));
        assert!(functor_extend(3, &std2).is_err());
        assert!(functor_restrict(3, &std2).is_err());
    }

    #[test]
    fn morphisms_map_to_themselves() {
        let std2 = make_standard_rep(2).unwrap();
        let minus = make_cycle_rep(2, 2, -ONE).unwrap();
        let sum = direct_sum(&[std2.clone(), minus.clone()]).unwrap();
        let spec = FunctorSpec::new(Signature::Finite(3), Signature::Finite(2));

        let id = functor_morphism(
            spec,
            &IntertwinerMap::identity(std2.clone()),
            &std2.labels(3),
            12,
        )
        .unwrap();
        assert!(check_intertwiner(&id, &id.source.labels(4), 12).unwrap());

        let incl = IntertwinerMap::inclusion(minus.clone(), sum.clone(), 1);
        let image = functor_morphism(spec, &incl, &minus.labels(3), 12).unwrap();
        assert_eq!(image.target.describe(), "F[3,2](sum(std:2,cyc:2:2:-1))");
        assert!(check_intertwiner(&image, &image.source.labels(4), 12).unwrap());

        let zero = functor_morphism(
            spec,
            &IntertwinerMap::zero(std2.clone(), minus.clone()),
            &std2.labels(3),
            12,
        )
        .unwrap();
        assert!(check_intertwiner(&zero, &zero.source.labels(4), 12).unwrap());

        let plus = make_cycle_rep(2, 2, ONE).unwrap();
        let states = direct_sum(&[minus.clone(), plus.clone()]).unwrap();
        let wrong = IntertwinerMap::inclusion(plus.clone(), states, 0);
        assert!(matches!(
            functor_morphism(spec, &wrong, &plus.labels(3), 12),
            Err(Error::NotAMorphism(_))
        ));
    }
}
