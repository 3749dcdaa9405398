//! Recursive-descent parser for operator text.
//!
//! Accepts the canonical rendering of [`ABElement`] and [`LaurentPoly`], and
//! more generally any sum of products of rationals, `a`, `b`, `lam` (with
//! integer powers) and bracketed subexpressions. Products are evaluated left
//! to right in the noncommutative algebra, so factored displays such as
//! `(a - 5/2*b)*[(a - 7/4*b)*(a - 3/4*b) - 4*lam^-2*(a - b)]` parse to their
//! normal form.

use num::BigInt;

use crate::algebra::ABElement;
use crate::error::{Error, Result};
use crate::exact::{LaurentPoly, Rat};

pub fn parse_element(text: &str) -> Result<ABElement> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(value)
}

/// Parses a Laurent polynomial in `lam`; `a` and `b` are rejected.
pub fn parse_laurent(text: &str) -> Result<LaurentPoly> {
    let x = parse_element(text)?;
    if x.terms().any(|(key, _)| key != (0, 0)) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("{text:?} involves a or b"),
        });
    }
    Ok(x.coeff(0, 0))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ABElement> {
        let negate_first = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate_first { -&first } else { first };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ABElement> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.ab_mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ABElement> {
        match self.peek() {
            Some(b'(') => self.bracketed(b'(', b')'),
            Some(b'[') => self.bracketed(b'[', b']'),
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let value = if self.eat(b'/') {
                    Rat::new(n, self.digits()?).map_err(|_| self.error("zero denominator"))?
                } else {
                    Rat::int(n)
                };
                Ok(ABElement::scalar(value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name {
                    "a" => Ok(ABElement::a().pow(self.unsigned_power()?)),
                    "b" => Ok(ABElement::b().pow(self.unsigned_power()?)),
                    "lam" => {
                        let exp = if self.eat(b'^') { self.signed_int()? } else { 1 };
                        Ok(ABElement::laurent(LaurentPoly::monomial(Rat::one(), exp)))
                    }
                    _ => Err(Error::Parse {
                        pos: start,
                        msg: format!("unknown symbol {name:?}"),
                    }),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn bracketed(&mut self, open: u8, close: u8) -> Result<ABElement> {
        self.eat(open);
        let inner = self.expr()?;
        if !self.eat(close) {
            return Err(self.error(&format!("expected '{}'", close as char)));
        }
        Ok(inner)
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(text.parse().expect("digits"))
    }

    fn unsigned_power(&mut self) -> Result<u32> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        let n = self.digits()?;
        u32::try_from(n).map_err(|_| self.error("exponent too large"))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let negative = self.eat(b'-');
        let n = self.digits()?;
        let n = i64::try_from(n).map_err(|_| self.error("exponent too large"))?;
        Ok(if negative { -n } else { n })
    }
}
