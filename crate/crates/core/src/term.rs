//! Images of basis vectors under monomial operators, and finite vector sums.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::label::{approx_eq, is_unit, BasisLabel, Scalar, ONE, PRUNE, TOLERANCE};

/// Image of a basis vector under a monomial operator: zero, or a unit phase
/// times another basis vector.
#[derive(Clone, Debug, PartialEq)]
pub enum MonomialTerm {
    Zero,
    Basis { phase: Scalar, label: BasisLabel },
}

impl MonomialTerm {
    pub fn unit(label: BasisLabel) -> Self {
        MonomialTerm::Basis { phase: ONE, label }
    }

    pub fn new(phase: Scalar, label: BasisLabel) -> Self {
        MonomialTerm::Basis { phase, label }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MonomialTerm::Zero)
    }

    pub fn label(&self) -> Option<&BasisLabel> {
        match self {
            MonomialTerm::Zero => None,
            MonomialTerm::Basis { label, .. } => Some(label),
        }
    }

    pub fn phase(&self) -> Option<Scalar> {
        match self {
            MonomialTerm::Zero => None,
            MonomialTerm::Basis { phase, .. } => Some(*phase),
        }
    }

    pub fn scaled(self, factor: Scalar) -> Self {
        match self {
            MonomialTerm::Zero => MonomialTerm::Zero,
            MonomialTerm::Basis { phase, label } => MonomialTerm::Basis {
                phase: phase * factor,
                label,
            },
        }
    }

    /// Applies a further monomial operator, multiplying phases.
    pub fn then<F>(self, op: F) -> Result<Self>
    where
        F: FnOnce(&BasisLabel) -> Result<MonomialTerm>,
    {
        match self {
            MonomialTerm::Zero => Ok(MonomialTerm::Zero),
            MonomialTerm::Basis { phase, label } => Ok(op(&label)?.scaled(phase)),
        }
    }

    /// Equality with phases compared to within [`TOLERANCE`].
    pub fn approx_eq(&self, other: &MonomialTerm) -> bool {
        match (self, other) {
            (MonomialTerm::Zero, MonomialTerm::Zero) => true,
            (
                MonomialTerm::Basis { phase: p, label: l },
                MonomialTerm::Basis { phase: q, label: m },
            ) => l == m && approx_eq(*p, *q),
            _ => false,
        }
    }

    pub fn is_unit_phase(&self) -> bool {
        self.phase().is_none_or(is_unit)
    }
}

impl fmt::Display for MonomialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialTerm::Zero => f.write_str("0"),
            MonomialTerm::Basis { phase, label } => {
                if *phase == ONE {
                    write!(f, "{label}")
                } else {
                    write!(f, "({phase})·{label}")
                }
            }
        }
    }
}

/// A finitely supported vector `Σ c_x e_x`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorSum {
    entries: BTreeMap<BasisLabel, Scalar>,
}

impl VectorSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(label: BasisLabel) -> Self {
        let mut v = Self::new();
        v.add(label, ONE);
        v
    }

    pub fn from_term(term: &MonomialTerm) -> Self {
        let mut v = Self::new();
        v.add_term(term, ONE);
        v
    }

    pub fn add(&mut self, label: BasisLabel, coeff: Scalar) {
        let entry = self.entries.entry(label);
        match entry {
            std::collections::btree_map::Entry::Vacant(slot) => {
                if coeff.norm() > PRUNE {
                    slot.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = *slot.get() + coeff;
                if sum.norm() > PRUNE {
                    *slot.get_mut() = sum;
                } else {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_term(&mut self, term: &MonomialTerm, coeff: Scalar) {
        if let MonomialTerm::Basis { phase, label } = term {
            self.add(label.clone(), phase * coeff);
        }
    }

    pub fn add_scaled(&mut self, other: &VectorSum, coeff: Scalar) {
        for (label, c) in &other.entries {
            self.add(label.clone(), c * coeff);
        }
    }

    pub fn scaled(&self, coeff: Scalar) -> VectorSum {
        let mut out = VectorSum::new();
        out.add_scaled(self, coeff);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, label: &BasisLabel) -> Scalar {
        self.entries.get(label).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Scalar)> {
        self.entries.iter()
    }

    /// `⟨self, other⟩`, antilinear in the first argument.
    pub fn inner(&self, other: &VectorSum) -> Scalar {
        self.entries
            .iter()
            .map(|(l, c)| c.conj() * other.get(l))
            .sum()
    }

    pub fn approx_eq(&self, other: &VectorSum) -> bool {
        let mut diff = self.clone();
        diff.add_scaled(other, -ONE);
        diff.entries.values().all(|c| c.norm() <= TOLERANCE)
    }

    /// Collapses to a single monomial term, failing if more than one label
    /// survives or the surviving coefficient is not a unit phase.
    pub fn to_term(&self) -> Result<MonomialTerm> {
        let live: Vec<_> = self
            .entries
            .iter()
            .filter(|(_, c)| c.norm() > TOLERANCE)
            .collect();
        match live.as_slice() {
            [] => Ok(MonomialTerm::Zero),
            [(label, c)] if is_unit(**c) => Ok(MonomialTerm::new(**c, (*label).clone())),
            _ => Err(Error::Inconsistent(format!("not a monomial: {self}"))),
        }
    }
}

impl fmt::Display for VectorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (k, (label, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})·{label}")?;
        }
        Ok(())
    }
}
