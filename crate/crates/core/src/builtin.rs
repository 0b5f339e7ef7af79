//! Built-in representations: standard, cycle, free `O_∞`, zero, and finite direct sums.

use crate::error::{Error, Result};
use crate::label::{is_unit, BasisLabel, Letters, Scalar, I, ONE};
use crate::rep::{Decoded, MonomialRep, RepAction, Signature};
use crate::term::MonomialTerm;

/// Renders a phase as a descriptor literal (`1`, `-1`, `i`, `-i` or `exp:<turns>`).
pub fn phase_literal(lambda: Scalar) -> String {
    let exact = [(ONE, "1"), (-ONE, "-1"), (I, "i"), (-I, "-i")];
    for (value, text) in exact {
        if (lambda - value).norm() <= 1e-12 {
            return text.to_string();
        }
    }
    // Twelve decimals keep `describe` stable when a descriptor is re-parsed:
    // the round trip through `exp(2πiθ)` perturbs only the last few bits.
    let turns = lambda.arg() / std::f64::consts::TAU;
    let turns = if turns < 0.0 { turns + 1.0 } else { turns };
    let text = format!("{turns:.12}");
    format!("exp:{}", text.trim_end_matches('0').trim_end_matches('.'))
}

/// `s_i e_x = e_{n·x + i − 1}` on `ℓ²(ℕ)`.
#[derive(Clone, Debug)]
struct StandardRep {
    n: u64,
}

impl RepAction for StandardRep {
    fn signature(&self) -> Signature {
        Signature::Finite(self.n as usize)
    }

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let x = self.index(x)?;
        let y = x
            .checked_mul(self.n)
            .and_then(|v| v.checked_add(generator as u64 - 1))
            .ok_or(Error::LabelOverflow)?;
        Ok(MonomialTerm::unit(BasisLabel::Int(y)))
    }

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let y = self.index(x)?;
        let shift = generator as u64 - 1;
        if y % self.n == shift {
            Ok(MonomialTerm::unit(BasisLabel::Int((y - shift) / self.n)))
        } else {
            Ok(MonomialTerm::Zero)
        }
    }

    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        let y = self.index(x)?;
        let r = y % self.n;
        Ok(Some(Decoded {
            generator: 1 + r as usize,
            phase: ONE,
            pre: BasisLabel::Int((y - r) / self.n),
        }))
    }

    fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        let count = self.n.saturating_pow(depth as u32);
        (0..count).map(BasisLabel::Int).collect()
    }

    fn contains(&self, x: &BasisLabel) -> bool {
        matches!(x, BasisLabel::Int(_))
    }

    fn describe(&self) -> String {
        format!("std:{}", self.n)
    }
}

impl StandardRep {
    fn index(&self, x: &BasisLabel) -> Result<u64> {
        match x {
            BasisLabel::Int(v) => Ok(*v),
            other => Err(Error::ForeignLabel(other.clone())),
        }
    }
}

/// Permutative representation with cyclic vector `Ω` and `s_c Ω = λ Ω`.
///
/// Labels are words over `1..=n` that do not end in `c`.
#[derive(Clone, Debug)]
struct CycleRep {
    n: u32,
    c: u32,
    lambda: Scalar,
}

impl CycleRep {
    fn word<'a>(&self, x: &'a BasisLabel) -> Result<&'a [u32]> {
        match x {
            BasisLabel::Word(w) if self.is_canonical(w) => Ok(w),
            other => Err(Error::ForeignLabel(other.clone())),
        }
    }

    fn is_canonical(&self, w: &[u32]) -> bool {
        w.iter().all(|&l| (1..=self.n).contains(&l)) && w.last() != Some(&self.c)
    }
}

impl RepAction for CycleRep {
    fn signature(&self) -> Signature {
        Signature::Finite(self.n as usize)
    }

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let w = self.word(x)?;
        let g = generator as u32;
        if w.is_empty() && g == self.c {
            return Ok(MonomialTerm::new(self.lambda, BasisLabel::omega()));
        }
        let mut out = Letters::with_capacity(w.len() + 1);
        out.push(g);
        out.extend_from_slice(w);
        Ok(MonomialTerm::unit(BasisLabel::Word(out)))
    }

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let w = self.word(x)?;
        let g = generator as u32;
        match w.split_first() {
            Some((&head, rest)) if head == g => Ok(MonomialTerm::unit(BasisLabel::word(rest))),
            None if g == self.c => Ok(MonomialTerm::new(self.lambda.conj(), BasisLabel::omega())),
            _ => Ok(MonomialTerm::Zero),
        }
    }

    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        let w = self.word(x)?;
        Ok(Some(match w.split_first() {
            None => Decoded {
                generator: self.c as usize,
                phase: self.lambda.conj(),
                pre: BasisLabel::omega(),
            },
            Some((&head, rest)) => Decoded {
                generator: head as usize,
                phase: ONE,
                pre: BasisLabel::word(rest),
            },
        }))
    }

    fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        let mut out = vec![BasisLabel::omega()];
        let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(layer.len() * self.n as usize);
            for w in &layer {
                for l in 1..=self.n {
                    if w.is_empty() && l == self.c {
                        continue;
                    }
                    let mut v = Vec::with_capacity(w.len() + 1);
                    v.push(l);
                    v.extend_from_slice(w);
                    next.push(v);
                }
            }
            out.extend(next.iter().map(|w| BasisLabel::word(w)));
            layer = next;
        }
        out
    }

    fn contains(&self, x: &BasisLabel) -> bool {
        matches!(x, BasisLabel::Word(w) if self.is_canonical(w))
    }

    fn describe(&self) -> String {
        format!("cyc:{}:{}:{}", self.n, self.c, phase_literal(self.lambda))
    }
}

/// Left-regular representation of `O_∞` on finite words over the positive integers.
#[derive(Clone, Debug)]
struct FreeInfinityRep;

impl FreeInfinityRep {
    fn word<'a>(&self, x: &'a BasisLabel) -> Result<&'a [u32]> {
        match x {
            BasisLabel::Word(w) if w.iter().all(|&l| l >= 1) => Ok(w),
            other => Err(Error::ForeignLabel(other.clone())),
        }
    }
}

impl RepAction for FreeInfinityRep {
    fn signature(&self) -> Signature {
        Signature::Infinity
    }

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let w = self.word(x)?;
        let g = u32::try_from(generator).map_err(|_| Error::LabelOverflow)?;
        let mut out = Letters::with_capacity(w.len() + 1);
        out.push(g);
        out.extend_from_slice(w);
        Ok(MonomialTerm::unit(BasisLabel::Word(out)))
    }

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let w = self.word(x)?;
        match w.split_first() {
            Some((&head, rest)) if head as usize == generator => {
                Ok(MonomialTerm::unit(BasisLabel::word(rest)))
            }
            _ => Ok(MonomialTerm::Zero),
        }
    }

    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        let w = self.word(x)?;
        Ok(w.split_first().map(|(&head, rest)| Decoded {
            generator: head as usize,
            phase: ONE,
            pre: BasisLabel::word(rest),
        }))
    }

    /// Words whose letters sum to at most `2·depth`.
    fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        fn extend(budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<BasisLabel>) {
            out.push(BasisLabel::word(prefix));
            for l in 1..=budget {
                prefix.push(l);
                extend(budget - l, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        extend(2 * depth as u32, &mut Vec::new(), &mut out);
        out
    }

    fn contains(&self, x: &BasisLabel) -> bool {
        matches!(x, BasisLabel::Word(w) if w.iter().all(|&l| l >= 1))
    }

    fn describe(&self) -> String {
        "free:inf".to_string()
    }
}

#[derive(Clone, Debug)]
struct ZeroRep {
    signature: Signature,
}

impl RepAction for ZeroRep {
    fn signature(&self) -> Signature {
        self.signature
    }

    fn apply(&self, _: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        Err(Error::ForeignLabel(x.clone()))
    }

    fn apply_adjoint(&self, _: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        Err(Error::ForeignLabel(x.clone()))
    }

    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        Err(Error::ForeignLabel(x.clone()))
    }

    fn labels(&self, _: usize) -> Vec<BasisLabel> {
        Vec::new()
    }

    fn contains(&self, _: &BasisLabel) -> bool {
        false
    }

    fn is_zero_rep(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        match self.signature {
            Signature::Finite(n) => format!("zero:{n}"),
            Signature::Infinity => "zero:inf".to_string(),
        }
    }
}

struct DirectSum {
    signature: Signature,
    parts: Vec<MonomialRep>,
}

impl DirectSum {
    fn split<'a>(&'a self, x: &'a BasisLabel) -> Result<(u32, &'a MonomialRep, &'a BasisLabel)> {
        match x {
            BasisLabel::Pair(b, inner) => match self.parts.get(*b as usize) {
                Some(part) => Ok((*b, part, inner)),
                None => Err(Error::ForeignLabel(x.clone())),
            },
            other => Err(Error::ForeignLabel(other.clone())),
        }
    }

    fn wrap(branch: u32, term: MonomialTerm) -> MonomialTerm {
        match term {
            MonomialTerm::Zero => MonomialTerm::Zero,
            MonomialTerm::Basis { phase, label } => {
                MonomialTerm::new(phase, BasisLabel::pair(branch, label))
            }
        }
    }
}

impl RepAction for DirectSum {
    fn signature(&self) -> Signature {
        self.signature
    }

    fn apply(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let (b, part, inner) = self.split(x)?;
        Ok(Self::wrap(b, part.apply(generator, inner)?))
    }

    fn apply_adjoint(&self, generator: usize, x: &BasisLabel) -> Result<MonomialTerm> {
        let (b, part, inner) = self.split(x)?;
        Ok(Self::wrap(b, part.apply_adjoint(generator, inner)?))
    }

    fn range_decode(&self, x: &BasisLabel) -> Result<Option<Decoded>> {
        let (b, part, inner) = self.split(x)?;
        Ok(part.range_decode(inner)?.map(|d| Decoded {
            pre: BasisLabel::pair(b, d.pre),
            ..d
        }))
    }

    fn labels(&self, depth: usize) -> Vec<BasisLabel> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(b, part)| {
                part.labels(depth)
                    .into_iter()
                    .map(move |l| BasisLabel::pair(b as u32, l))
            })
            .collect()
    }

    fn contains(&self, x: &BasisLabel) -> bool {
        self.split(x)
            .is_ok_and(|(_, part, inner)| part.contains(inner))
    }

    fn is_zero_rep(&self) -> bool {
        self.parts.iter().all(MonomialRep::is_zero_rep)
    }

    fn describe(&self) -> String {
        let inner: Vec<String> = self.parts.iter().map(MonomialRep::describe).collect();
        format!("sum({})", inner.join(","))
    }
}

/// The representation `s_i e_x = e_{n·x+i−1}` of `O_n` on `ℓ²(ℕ)`.
pub fn make_standard_rep(n: usize) -> Result<MonomialRep> {
    Signature::finite(n)?;
    Ok(MonomialRep::new(StandardRep { n: n as u64 }))
}

/// Permutative representation of `O_n` with one phase-decorated 1-cycle
/// `s_c Ω = λ Ω`; `c = n` with `λ = ±1` gives the Cuntz-state GNS representations.
pub fn make_cycle_rep(n: usize, c: usize, lambda: Scalar) -> Result<MonomialRep> {
    let signature = Signature::finite(n)?;
    if !(1..=n).contains(&c) {
        return Err(Error::InvalidGenerator {
            index: c,
            signature,
        });
    }
    if !is_unit(lambda) {
        return Err(Error::InvalidPhase {
            re: lambda.re,
            im: lambda.im,
        });
    }
    Ok(MonomialRep::new(CycleRep {
        n: n as u32,
        c: c as u32,
        lambda,
    }))
}

/// `t_j` prepends the letter `j`; `Ω` lies in no generator's range.
pub fn make_free_infinity_rep() -> MonomialRep {
    MonomialRep::new(FreeInfinityRep)
}

pub fn make_zero_rep(signature: Signature) -> MonomialRep {
    MonomialRep::new(ZeroRep { signature })
}

/// Finite direct sum; labels are `Pair(branch, inner)` with 0-based branches.
pub fn direct_sum(parts: &[MonomialRep]) -> Result<MonomialRep> {
    let first = parts.first().ok_or(Error::EmptySum)?;
    let signature = first.signature();
    if let Some(bad) = parts.iter().find(|p| p.signature() != signature) {
        return Err(Error::SignatureMismatch {
            expected: signature,
            found: bad.signature(),
        });
    }
    Ok(MonomialRep::new(DirectSum {
        signature,
        parts: parts.to_vec(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::I;

    fn int(x: u64) -> BasisLabel {
        BasisLabel::Int(x)
    }

    #[test]
    fn standard_rep_actions() {
        let std2 = make_standard_rep(2).unwrap();
        assert_eq!(std2.apply(1, &int(3)).unwrap(), MonomialTerm::unit(int(6)));
        assert_eq!(std2.apply(2, &int(3)).unwrap(), MonomialTerm::unit(int(7)));
        assert_eq!(std2.apply_adjoint(2, &int(6)).unwrap(), MonomialTerm::Zero);
        let std3 = make_standard_rep(3).unwrap();
        assert_eq!(std3.apply(2, &int(4)).unwrap(), MonomialTerm::unit(int(13)));
        let d = std3.range_decode(&int(14)).unwrap().unwrap();
        assert_eq!((d.generator, d.pre), (3, int(4)));
    }

    #[test]
    fn arity_below_two_is_rejected() {
        assert_eq!(
            make_standard_rep(1).unwrap_err(),
            Error::InvalidSignature(1)
        );
        assert!(make_cycle_rep(0, 1, ONE).is_err());
    }

    #[test]
    fn cycle_rep_eigenvector() {
        let minus = make_cycle_rep(2, 2, -ONE).unwrap();
        assert_eq!(
            minus.apply(2, &BasisLabel::omega()).unwrap(),
            MonomialTerm::new(-ONE, BasisLabel::omega())
        );
        let plus = make_cycle_rep(2, 2, ONE).unwrap();
        assert_eq!(
            plus.apply(2, &BasisLabel::omega()).unwrap(),
            MonomialTerm::unit(BasisLabel::omega())
        );
        let rot = make_cycle_rep(3, 3, I).unwrap();
        assert_eq!(
            rot.apply_adjoint(3, &BasisLabel::omega()).unwrap(),
            MonomialTerm::new(-I, BasisLabel::omega())
        );
        let d = rot.range_decode(&BasisLabel::omega()).unwrap().unwrap();
        assert_eq!((d.generator, d.phase), (3, -I));
    }

    #[test]
    fn cycle_rep_rejects_bad_parameters() {
        assert!(matches!(
            make_cycle_rep(2, 2, Scalar::new(0.5, 0.0)),
            Err(Error::InvalidPhase { .. })
        ));
        assert!(matches!(
            make_cycle_rep(3, 4, ONE),
            Err(Error::InvalidGenerator { index: 4, .. })
        ));
        let rep = make_cycle_rep(2, 2, ONE).unwrap();
        assert!(!rep.contains(&BasisLabel::word(&[1, 2])));
        assert!(rep.apply(1, &BasisLabel::word(&[2])).is_err());
    }

    #[test]
    fn cycle_rep_labels_exclude_cycle_letter_suffix() {
        let rep = make_cycle_rep(3, 1, ONE).unwrap();
        let labels = rep.labels(2);
        // Ω, 2 letters of length one, 3·2 of length two
        assert_eq!(labels.len(), 1 + 2 + 6);
        assert!(labels.iter().all(|l| rep.contains(l)));
    }

    #[test]
    fn free_infinity_rep_actions() {
        let free = make_free_infinity_rep();
        assert_eq!(free.signature(), Signature::Infinity);
        assert_eq!(
            free.apply(5, &BasisLabel::omega()).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[5]))
        );
        assert_eq!(
            free.apply_adjoint(2, &BasisLabel::word(&[2, 7])).unwrap(),
            MonomialTerm::unit(BasisLabel::word(&[7]))
        );
        assert_eq!(free.range_decode(&BasisLabel::omega()).unwrap(), None);
        assert!(free.apply(0, &BasisLabel::omega()).is_err());
    }

    #[test]
    fn direct_sum_is_blockwise() {
        let std2 = make_standard_rep(2).unwrap();
        let sum = direct_sum(&[std2.clone(), std2.clone()]).unwrap();
        assert_eq!(
            sum.apply(1, &BasisLabel::pair(1, int(3))).unwrap(),
            MonomialTerm::unit(BasisLabel::pair(1, int(6)))
        );
        let cyc = direct_sum(&[
            make_cycle_rep(2, 2, ONE).unwrap(),
            make_cycle_rep(2, 2, -ONE).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            cyc.apply(2, &BasisLabel::pair(1, BasisLabel::omega()))
                .unwrap(),
            MonomialTerm::new(-ONE, BasisLabel::pair(1, BasisLabel::omega()))
        );
        let single = direct_sum(std::slice::from_ref(&std2)).unwrap();
        for x in std2.labels(3) {
            let wrapped = BasisLabel::pair(0, x.clone());
            for g in 1..=2 {
                let expected = match std2.apply(g, &x).unwrap() {
                    MonomialTerm::Basis { phase, label } => {
                        MonomialTerm::new(phase, BasisLabel::pair(0, label))
                    }
                    MonomialTerm::Zero => MonomialTerm::Zero,
                };
                assert_eq!(single.apply(g, &wrapped).unwrap(), expected);
            }
        }
    }

    #[test]
    fn direct_sum_rejects_mixed_signatures() {
        let err = direct_sum(&[make_standard_rep(2).unwrap(), make_standard_rep(3).unwrap()])
            .unwrap_err();
        assert!(matches!(err, Error::SignatureMismatch { .. }));
        assert_eq!(direct_sum(&[]).unwrap_err(), Error::EmptySum);
    }

    #[test]
    fn direct_sum_labels_are_disjoint_union() {
        let a = make_standard_rep(2).unwrap();
        let b = make_cycle_rep(2, 1, I).unwrap();
        let sum = direct_sum(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(sum.labels(3).len(), a.labels(3).len() + b.labels(3).len());
    }

    #[test]
    fn descriptors() {
        assert_eq!(make_cycle_rep(3, 3, I).unwrap().describe(), "cyc:3:3:i");
        assert_eq!(make_cycle_rep(2, 2, -ONE).unwrap().describe(), "cyc:2:2:-1");
        assert_eq!(
            phase_literal(crate::label::phase_from_turns(0.125)),
            "exp:0.125"
        );
    }
}
