//! Basis labels and the scalars attached to them.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Complex scalar used for phases and vector coefficients.
pub type Scalar = Complex64;

/// Comparison tolerance for phases and coefficients.
pub const TOLERANCE: f64 = 1e-9;

/// Coefficients at or below this modulus are dropped from vector sums.
pub const PRUNE: f64 = 1e-12;

pub const ONE: Scalar = Complex64::new(1.0, 0.0);
pub const ZERO: Scalar = Complex64::new(0.0, 0.0);
pub const I: Scalar = Complex64::new(0.0, 1.0);

pub fn is_unit(z: Scalar) -> bool {
    (z.norm() - 1.0).abs() <= TOLERANCE
}

pub fn approx_eq(a: Scalar, b: Scalar) -> bool {
    (a - b).norm() <= TOLERANCE
}

/// `exp(2πi·turns)`, snapped to an exact value on multiples of a quarter turn.
pub fn phase_from_turns(turns: f64) -> Scalar {
    let quarters = turns * 4.0;
    if (quarters - quarters.round()).abs() < 1e-15 {
        return match (quarters.round() as i64).rem_euclid(4) {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * turns)
}

/// Letters of a word label; short words stay inline.
pub type Letters = SmallVec<[u32; 8]>;

/// Name of one orthonormal basis vector.
///
/// Words are read left to right as operator products applied to the cyclic
/// vector: `Word([2, 1])` is `s_2 s_1 Ω` and the empty word is `Ω` itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisLabel {
    Int(u64),
    Word(Letters),
    Pair(u32, Box<BasisLabel>),
}

impl BasisLabel {
    pub fn omega() -> Self {
        BasisLabel::Word(Letters::new())
    }

    pub fn word(letters: &[u32]) -> Self {
        BasisLabel::Word(Letters::from_slice(letters))
    }

    pub fn pair(branch: u32, inner: BasisLabel) -> Self {
        BasisLabel::Pair(branch, Box::new(inner))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("labels always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Int(x) => write!(f, "e{x}"),
            BasisLabel::Word(w) if w.is_empty() => f.write_str("Ω"),
            BasisLabel::Word(w) => {
                f.write_str("[")?;
                for (k, l) in w.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{l}")?;
                }
                f.write_str("]")
            }
            BasisLabel::Pair(b, inner) => write!(f, "({b}, {inner})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_encoding_matches_wire_format() {
        assert_eq!(BasisLabel::Int(7).to_json(), r#"{"int":7}"#);
        assert_eq!(BasisLabel::word(&[2, 1]).to_json(), r#"{"word":[2,1]}"#);
        assert_eq!(
            BasisLabel::pair(1, BasisLabel::omega()).to_json(),
            r#"{"pair":[1,{"word":[]}]}"#
        );
        let nested = BasisLabel::from_json(r#"{"pair":[0,{"pair":[2,{"int":3}]}]}"#).unwrap();
        assert_eq!(
            nested,
            BasisLabel::pair(0, BasisLabel::pair(2, BasisLabel::Int(3)))
        );
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(phase_from_turns(0.0), ONE);
        assert_eq!(phase_from_turns(0.25), I);
        assert_eq!(phase_from_turns(0.5), -ONE);
        assert_eq!(phase_from_turns(-0.25), -I);
        assert!(is_unit(phase_from_turns(0.1)));
    }
}
