//! Parser for tautological expressions on M̄_{0,n}.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ('^' integer)?
//! primary := integer ('/' integer)? | 'psi(' label ')' | 'delta{' label (',' label)* '}' | '(' expr ')'
//! label   := integer | 'inf'
//! ```
//!
//! Whitespace is ignored between tokens. The output of `GradedPoly`'s
//! `Display` is accepted, so printing and re-parsing is the identity.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::ParseError;
use crate::exact::{GradedPoly, Rational};
use crate::m0n::M0nSpace;

struct Parser<'a> {
    space: &'a M0nSpace,
    src: &'a [u8],
    pos: usize,
}

/// Parses `src` into a class on `space`, boundary sets in canonical form.
pub fn parse_taut_expr(space: &M0nSpace, src: &str) -> Result<GradedPoly, ParseError> {
    let mut p = Parser { space, src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn error_at(&self, position: usize, message: impl Into<String>) -> ParseError {
        ParseError { position, message: message.into() }
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => Err(self.error(format!("expected `{}`, found `{}`", c as char, found as char))),
                None => Err(self.error(format!("expected `{}`, found end of input", c as char))),
            }
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(word.as_bytes()) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn expr(&mut self) -> Result<GradedPoly, ParseError> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?).expect("same space");
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?).expect("same space");
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GradedPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?).expect("same space");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GradedPoly, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let at = self.pos;
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| self.error_at(at, "exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<GradedPoly, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let value = if self.eat(b'/') {
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.error_at(at, "zero denominator"));
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                Ok(self.space.one().scale(&value))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'p') if self.keyword("psi") => {
                self.expect(b'(')?;
                let i = self.label()?;
                self.expect(b')')?;
                Ok(self.space.psi(i))
            }
            Some(b'd') if self.keyword("delta") => {
                self.expect(b'{')?;
                let open = self.pos - 1;
                let mut members = vec![self.label()?];
                while self.eat(b',') {
                    members.push(self.label()?);
                }
                self.expect(b'}')?;
                self.space.delta(&members).map_err(|e| {
                    let size = members.len();
                    let msg = if size < 2 {
                        "boundary set too small".to_string()
                    } else if size > self.space.n() - 2 {
                        "boundary set too large".to_string()
                    } else {
                        e.to_string()
                    };
                    self.error_at(open, msg)
                })
            }
            Some(c) => Err(self.error_at(start, format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn label(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a marking label"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii label");
        self.space.marking(text).map_err(|_| self.error_at(start, format!("invalid label `{text}`")))
    }
}
