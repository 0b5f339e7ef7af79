use super::{GenFamily, OperatorExpr};
use crate::error::{Error, Result};
use crate::label::{Scalar, I, ONE};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Gen(GenFamily, usize),
    Identity,
    Q,
    U,
    R(usize),
    F(usize),
    Number(f64),
    ImagUnit,
    Plus,
    Minus,
    Prime,
    Open,
    Close,
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn index(&mut self, what: &str) -> Result<usize> {
        let start = self.pos;
        if self.peek_char() == Some('-') {
            return Err(syntax(start, format!("negative index for {what}")));
        }
        while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| syntax(start, format!("expected an integer index for {what}")))
    }

    fn bracketed(&mut self, what: &str) -> Result<usize> {
        if self.bump() != Some('[') {
            return Err(syntax(self.pos, format!("expected '[' after {what}")));
        }
        let value = self.index(what)?;
        if self.bump() != Some(']') {
            return Err(syntax(self.pos, format!("expected ']' to close {what}")));
        }
        Ok(value)
    }

    fn tokens(mut self) -> Result<Vec<(usize, Token)>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek_char() {
            let start = self.pos;
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let token = match c {
                '+' => {
                    self.bump();
                    Token::Plus
                }
                '-' => {
                    self.bump();
                    Token::Minus
                }
                '\'' => {
                    self.bump();
                    Token::Prime
                }
                '(' => {
                    self.bump();
                    Token::Open
                }
                ')' => {
                    self.bump();
                    Token::Close
                }
                's' | 'r' | 't' => {
                    self.bump();
                    let family = match c {
                        's' => GenFamily::S,
                        'r' => GenFamily::R,
                        _ => GenFamily::T,
                    };
                    let index = self.index("generator")?;
                    if index == 0 {
                        return Err(syntax(start, "generator indices start at 1"));
                    }
                    Token::Gen(family, index)
                }
                'I' => {
                    self.bump();
                    Token::Identity
                }
                'Q' => {
                    self.bump();
                    Token::Q
                }
                'U' => {
                    self.bump();
                    Token::U
                }
                'i' => {
                    self.bump();
                    Token::ImagUnit
                }
                'R' => {
                    self.bump();
                    Token::R(self.bracketed("R")?)
                }
                'f' => {
                    self.bump();
                    let j = self.bracketed("f")?;
                    if j == 0 {
                        return Err(syntax(start, "f[j] requires j >= 1"));
                    }
                    Token::F(j)
                }
                d if d.is_ascii_digit() || d == '.' => {
                    while self
                        .peek_char()
                        .is_some_and(|c| c.is_ascii_digit() || c == '.')
                    {
                        self.pos += 1;
                    }
                    let literal = &self.text[start..self.pos];
                    Token::Number(
                        literal
                            .parse()
                            .map_err(|_| syntax(start, format!("bad number {literal:?}")))?,
                    )
                }
                other if other.is_alphabetic() => {
                    return Err(syntax(start, format!("unknown generator family {other:?}")));
                }
                other => return Err(syntax(start, format!("unexpected character {other:?}"))),
            };
            out.push((start, token));
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    next: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.next).map_or(self.end, |(p, _)| *p)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.next).map(|(_, t)| t.clone());
        self.next += 1;
        t
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.advance();
                -ONE
            }
            Some(Token::Plus) => {
                self.advance();
                ONE
            }
            _ => ONE,
        };
        loop {
            let (coeff, body) = self.term()?;
            terms.push((sign * coeff, body));
            sign = match self.peek() {
                Some(Token::Plus) => ONE,
                Some(Token::Minus) => -ONE,
                _ => break,
            };
            self.advance();
        }
        Ok(OperatorExpr::sum(terms))
    }

    fn term(&mut self) -> Result<(Scalar, OperatorExpr)> {
        let coeff = self.scalar()?;
        let mut factors = Vec::new();
        while let Some(factor) = self.factor()? {
            factors.push(factor);
        }
        if factors.is_empty() {
            return Err(syntax(self.position(), "expected an operator"));
        }
        Ok((coeff.unwrap_or(ONE), OperatorExpr::product(factors)))
    }

    fn scalar(&mut self) -> Result<Option<Scalar>> {
        match self.peek() {
            Some(Token::Number(v)) => {
                let v = *v;
                self.advance();
                if self.peek() == Some(&Token::ImagUnit) {
                    self.advance();
                    Ok(Some(I * v))
                } else {
                    Ok(Some(Scalar::new(v, 0.0)))
                }
            }
            Some(Token::ImagUnit) => {
                self.advance();
                Ok(Some(I))
            }
            _ => Ok(None),
        }
    }

    fn factor(&mut self) -> Result<Option<OperatorExpr>> {
        let mut atom = match self.peek() {
            Some(Token::Gen(family, index)) => OperatorExpr::gen(*family, *index),
            Some(Token::Identity) => OperatorExpr::Identity,
            Some(Token::Q) => OperatorExpr::Q,
            Some(Token::U) => OperatorExpr::U,
            Some(Token::R(a)) => OperatorExpr::R(*a),
            Some(Token::F(j)) => OperatorExpr::F(*j),
            Some(Token::Open) => {
                self.advance();
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(syntax(self.position(), "expected ')'"));
                }
                inner
            }
            Some(Token::Number(_)) | Some(Token::ImagUnit) => {
                return Err(syntax(
                    self.position(),
                    "scalars must precede the operators of a term",
                ));
            }
            _ => return Ok(None),
        };
        self.advance();
        while self.peek() == Some(&Token::Prime) {
            self.advance();
            atom = atom.adjoint();
        }
        Ok(Some(atom))
    }
}

/// Parses an operator expression; errors carry the byte offset of the problem.
pub fn parse(text: &str) -> Result<OperatorExpr> {
    let tokens = Lexer { text, pos: 0 }.tokens()?;
    if tokens.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut parser = Parser {
        tokens,
        next: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if parser.next < parser.tokens.len() {
        return Err(syntax(parser.position(), "unexpected trailing input"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(i: usize) -> OperatorExpr {
        OperatorExpr::gen(GenFamily::S, i)
    }

    fn r(i: usize) -> OperatorExpr {
        OperatorExpr::gen(GenFamily::R, i)
    }

    #[test]
    fn two_word_sum() {
        assert_eq!(
            parse("r2 r1' + r3 r1 r2'").unwrap(),
            OperatorExpr::Sum(vec![
                (ONE, OperatorExpr::Product(vec![r(2), r(1).adjoint()])),
                (ONE, OperatorExpr::Product(vec![r(3), r(1), r(2).adjoint()])),
            ])
        );
    }

    #[test]
    fn identity_minus_q() {
        assert_eq!(
            parse("I - Q").unwrap(),
            OperatorExpr::Sum(vec![(ONE, OperatorExpr::Identity), (-ONE, OperatorExpr::Q)])
        );
    }

    #[test]
    fn transition_display() {
        let inner = OperatorExpr::Sum(vec![(ONE, OperatorExpr::Identity), (-ONE, OperatorExpr::Q)]);
        assert_eq!(
            parse("s2 (I - Q) + R[1]").unwrap(),
            OperatorExpr::Sum(vec![
                (ONE, OperatorExpr::Product(vec![s(2), inner])),
                (ONE, OperatorExpr::R(1)),
            ])
        );
    }

    #[test]
    fn scalars_and_special_nodes() {
        assert_eq!(
            parse("-i f[3]'").unwrap(),
            OperatorExpr::Sum(vec![(-I, OperatorExpr::F(3).adjoint())])
        );
        assert_eq!(
            parse("0.5 U + 2i s1''").unwrap(),
            OperatorExpr::Sum(vec![
                (Scalar::new(0.5, 0.0), OperatorExpr::U),
                (I * 2.0, s(1).adjoint().adjoint()),
            ])
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("s1 x2").unwrap_err(),
            Error::Syntax {
                position: 3,
                message: "unknown generator family 'x'".into()
            }
        );
        assert!(matches!(
            parse("s-1"),
            Err(Error::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            parse("(s1 + s2"),
            Err(Error::Syntax { position: 8, .. })
        ));
        assert!(matches!(
            parse("s1 +"),
            Err(Error::Syntax { position: 4, .. })
        ));
        assert!(matches!(parse("R[x]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("s0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(
            parse("s1 2"),
            Err(Error::Syntax { position: 3, .. })
        ));
    }

    fn arb_expr() -> impl Strategy<Value = OperatorExpr> {
        let leaf = prop_oneof![
            (1usize..6).prop_map(s),
            (1usize..6).prop_map(r),
            Just(OperatorExpr::Identity),
            Just(OperatorExpr::Q),
            Just(OperatorExpr::U),
            (0usize..5).prop_map(OperatorExpr::R),
            (1usize..9).prop_map(OperatorExpr::F),
        ];
        leaf.prop_recursive(4, 24, 4, |inner| {
            let coeff = prop_oneof![
                Just(ONE),
                Just(-ONE),
                Just(I),
                Just(-I),
                Just(Scalar::new(2.5, 0.0))
            ];
            prop_oneof![
                inner.clone().prop_map(OperatorExpr::adjoint),
                prop::collection::vec(inner.clone(), 2..4).prop_map(OperatorExpr::Product),
                prop::collection::vec((coeff, inner), 2..4).prop_map(OperatorExpr::Sum),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_stable(expr in arb_expr()) {
            let once = parse(&expr.to_string()).unwrap();
            let twice = parse(&once.to_string()).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
