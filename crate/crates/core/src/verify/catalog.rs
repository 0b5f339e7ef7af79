//! Representation catalog used by the verification suite.

use crate::builtin::{direct_sum, make_cycle_rep, make_standard_rep};
use crate::descriptor::parse_descriptor;
use crate::error::Result;
use crate::label::{Scalar, I, ONE};
use crate::rep::{MonomialRep, Signature};

/// A catalog member, remembering its summands when it is a direct sum.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub rep: MonomialRep,
    pub parts: Vec<MonomialRep>,
}

impl CatalogEntry {
    pub fn single(rep: MonomialRep) -> Self {
        CatalogEntry {
            rep,
            parts: Vec::new(),
        }
    }

    pub fn sum(parts: Vec<MonomialRep>) -> Result<Self> {
        Ok(CatalogEntry {
            rep: direct_sum(&parts)?,
            parts,
        })
    }

    pub fn name(&self) -> String {
        self.rep.describe()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogChoice {
    /// `std:m`, `cyc:m:c:λ` for `c ∈ {1, m}`, `λ ∈ {1, −1, i}`, and the direct
    /// sums of neighbouring entries.
    Default,
    /// Only the representations without direct sums.
    Basic,
    Empty,
    /// Descriptor strings; each is used at its own arity.
    Custom(Vec<String>),
}

const PHASES: [Scalar; 3] = [ONE, Scalar::new(-1.0, 0.0), I];

/// `std:m` and the six cycle representations.
pub fn basic_reps(m: usize) -> Result<Vec<MonomialRep>> {
    let mut out = vec![make_standard_rep(m)?];
    for c in [1, m] {
        for lambda in PHASES {
            out.push(make_cycle_rep(m, c, lambda)?);
        }
    }
    Ok(out)
}

pub fn catalog(choice: &CatalogChoice, m: usize) -> Result<Vec<CatalogEntry>> {
    match choice {
        CatalogChoice::Empty => Ok(Vec::new()),
        CatalogChoice::Basic => Ok(basic_reps(m)?
            .into_iter()
            .map(CatalogEntry::single)
            .collect()),
        CatalogChoice::Default => {
            let basic = basic_reps(m)?;
            let mut out: Vec<CatalogEntry> =
                basic.iter().cloned().map(CatalogEntry::single).collect();
            for pair in basic.windows(2) {
                out.push(CatalogEntry::sum(pair.to_vec())?);
            }
            Ok(out)
        }
        CatalogChoice::Custom(descriptors) => {
            let mut out = Vec::new();
            for d in descriptors {
                let rep = parse_descriptor(d)?;
                if rep.signature() == Signature::Finite(m) {
                    out.push(CatalogEntry::single(rep));
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_shape() {
        let entries = catalog(&CatalogChoice::Default, 3).unwrap();
        assert_eq!(entries.len(), 7 + 6);
        assert_eq!(entries[0].name(), "std:3");
        assert_eq!(entries[7].name(), "sum(std:3,cyc:3:1:1)");
        assert!(entries
            .iter()
            .all(|e| e.rep.signature() == Signature::Finite(3)));
        assert!(catalog(&CatalogChoice::Empty, 3).unwrap().is_empty());
    }

    #[test]
    fn custom_catalog_filters_by_arity() {
        let choice = CatalogChoice::Custom(vec!["std:2".into(), "cyc:3:3:-1".into()]);
        assert_eq!(catalog(&choice, 3).unwrap().len(), 1);
        assert_eq!(catalog(&choice, 4).unwrap().len(), 0);
    }
}
