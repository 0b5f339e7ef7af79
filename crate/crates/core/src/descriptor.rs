//! Textual representation descriptors.
//!
//! ```text
//! desc  := "std:" N
//!        | "cyc:" N ":" C ":" PHASE
//!        | "free:inf"
//!        | "zero:" (N | "inf")
//!        | "sum(" desc { "," desc } ")"
//!        | "F[" N "," M "](" desc ")"      F_{n,m}
//!        | "Finf[" N "](" desc ")"        F_{∞,n}
//!        | "Fext[" N "](" desc ")"        F_{n,∞}
//! PHASE := "1" | "-1" | "i" | "-i" | "exp:" TURNS
//! ```
//!
//! `exp:θ` is `exp(2πiθ)`. [`MonomialRep::describe`] produces strings in this
//! grammar, so `parse_descriptor(rep.describe())` rebuilds an equal representation.

use crate::builtin::{
    direct_sum, make_cycle_rep, make_free_infinity_rep, make_standard_rep, make_zero_rep,
};
use crate::error::{Error, Result};
use crate::functor::{functor_apply, functor_extend, functor_restrict};
use crate::label::{phase_from_turns, Scalar, I, ONE};
use crate::rep::{MonomialRep, Signature};

pub const GRAMMAR: &str = "\
std:N                 standard representation of O_N on l2(N): s_i e_x = e_(N x + i - 1)
cyc:N:C:PHASE         cycle representation of O_N with s_C Omega = PHASE Omega
free:inf              free representation of O_inf on words over positive integers
zero:N | zero:inf     zero representation
sum(D1,D2,...)        finite direct sum (labels {\"pair\":[branch,label]})
F[N,M](D)             F_(N,M): Rep O_M -> Rep O_N
Finf[N](D)            F_(inf,N): restriction along f_(N,inf)
Fext[N](D)            F_(N,inf): unmagnifying extension of an O_inf representation
PHASE                 1 | -1 | i | -i | exp:THETA  (exp(2 pi i THETA))";

pub fn parse_phase(text: &str) -> Option<Scalar> {
    match text {
        "1" => Some(ONE),
        "-1" => Some(-ONE),
        "i" => Some(I),
        "-i" => Some(-I),
        _ => {
            let turns: f64 = text.strip_prefix("exp:")?.parse().ok()?;
            turns.is_finite().then(|| phase_from_turns(turns))
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Descriptor {
            descriptor: self.text.to_string(),
            message: format!("at {}: {}", self.pos, message.into()),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, prefix: &str) -> bool {
        if self.rest().starts_with(prefix) {
            self.pos += prefix.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, prefix: &str) -> Result<()> {
        if self.eat(prefix) {
            Ok(())
        } else {
            Err(self.error(format!("expected {prefix:?}")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        let value = self.rest()[..len]
            .parse()
            .map_err(|_| self.error("number too large"))?;
        self.pos += len;
        Ok(value)
    }

    /// Everything up to the next `,` or `)` at this nesting level.
    fn atom(&mut self) -> &'a str {
        let len = self.rest().find([',', ')']).unwrap_or(self.rest().len());
        let atom = &self.rest()[..len];
        self.pos += len;
        atom
    }

    fn wrap<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Descriptor { .. } => e,
            other => self.error(other.to_string()),
        })
    }

    fn desc(&mut self) -> Result<MonomialRep> {
        if self.eat("std:") {
            let n = self.number()?;
            return self.wrap(make_standard_rep(n));
        }
        if self.eat("cyc:") {
            let n = self.number()?;
            self.expect(":")?;
            let c = self.number()?;
            self.expect(":")?;
            let literal = self.atom();
            let lambda =
                parse_phase(literal).ok_or_else(|| self.error(format!("bad phase {literal:?}")))?;
            return self.wrap(make_cycle_rep(n, c, lambda));
        }
        if self.eat("free:inf") {
            return Ok(make_free_infinity_rep());
        }
        if self.eat("zero:") {
            if self.eat("inf") {
                return Ok(make_zero_rep(Signature::Infinity));
            }
            let n = self.number()?;
            return Ok(make_zero_rep(self.wrap(Signature::finite(n))?));
        }
        if self.eat("sum(") {
            let mut parts = vec![self.desc()?];
            while self.eat(",") {
                parts.push(self.desc()?);
            }
            self.expect(")")?;
            return self.wrap(direct_sum(&parts));
        }
        if self.eat("Finf[") {
            let n = self.number()?;
            self.expect("](")?;
            let inner = self.desc()?;
            self.expect(")")?;
            return self.wrap(functor_restrict(n, &inner));
        }
        if self.eat("Fext[") {
            let n = self.number()?;
            self.expect("](")?;
            let inner = self.desc()?;
            self.expect(")")?;
            return self.wrap(functor_extend(n, &inner));
        }
        if self.eat("F[") {
            let n = self.number()?;
            self.expect(",")?;
            let m = self.number()?;
            self.expect("](")?;
            let inner = self.desc()?;
            self.expect(")")?;
            return self.wrap(functor_apply(n, m, &inner));
        }
        Err(self.error("unknown representation"))
    }
}

pub fn parse_descriptor(text: &str) -> Result<MonomialRep> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cursor = Cursor {
        text: &compact,
        pos: 0,
    };
    let rep = cursor.desc()?;
    if cursor.pos != compact.len() {
        return Err(cursor.error("trailing input"));
    }
    Ok(rep)
}
