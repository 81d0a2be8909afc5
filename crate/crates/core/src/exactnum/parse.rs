use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::QuadraticSurd;
use crate::error::{Error, Result};

/// Radicand given to rationals parsed without any `sqrt` term.
pub const RATIONAL_PLACEHOLDER_RADICAND: i64 = 2;

/// Parses `(a+b*sqrt(D))/c` and its abbreviations.
///
/// Accepted: `sqrt(2)`, `-3`, `3/2`, `1+sqrt(5)`, `2*sqrt(3)-1`,
/// `(1+sqrt(5))/2`. A `/c` denominator after a radical needs parentheses
/// around the numerator, so `1+sqrt(5)/2` is rejected.
pub fn parse_surd(text: &str) -> Result<QuadraticSurd> {
    let src: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let x = p.surd()?;
    if p.pos != p.s.len() {
        return p.fail("trailing input");
    }
    Ok(x)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

#[derive(Default)]
struct Body {
    a: BigInt,
    b: BigInt,
    d: Option<BigInt>,
    terms: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} at offset {} in `{}`", self.pos, String::from_utf8_lossy(self.s))))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected integer");
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn surd(&mut self) -> Result<QuadraticSurd> {
        let (body, parenthesized) = if self.eat(b'(') {
            let body = self.body()?;
            if !self.eat(b')') {
                return self.fail("expected `)`");
            }
            (body, true)
        } else {
            (self.body()?, false)
        };
        let c = if self.eat(b'/') {
            let plain_fraction = body.d.is_none() && body.terms == 1;
            if !parenthesized && !plain_fraction {
                return self.fail("ambiguous `/`: parenthesize the numerator, as in `(a+b*sqrt(D))/c`");
            }
            let c = self.uint()?;
            if c.is_zero() {
                return Err(Error::Arithmetic("zero denominator".into()));
            }
            c
        } else {
            BigInt::one()
        };
        let d = body.d.unwrap_or_else(|| BigInt::from(RATIONAL_PLACEHOLDER_RADICAND));
        QuadraticSurd::new(body.a, body.b, c, d)
    }

    fn body(&mut self) -> Result<Body> {
        let mut body = Body::default();
        loop {
            let negative = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            self.term(&mut body, negative)?;
            body.terms += 1;
            match self.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => break,
            }
        }
        Ok(body)
    }

    fn term(&mut self, body: &mut Body, negative: bool) -> Result<()> {
        let sign = if negative { -BigInt::one() } else { BigInt::one() };
        if self.eat_str("sqrt(") {
            let d = self.radicand()?;
            return Self::add_radical(self, body, sign, d);
        }
        let n = self.uint()?;
        if self.eat(b'*') {
            if !self.eat_str("sqrt(") {
                return self.fail("expected `sqrt(` after `*`");
            }
            let d = self.radicand()?;
            return Self::add_radical(self, body, sign * n, d);
        }
        body.a += sign * n;
        Ok(())
    }

    fn radicand(&mut self) -> Result<BigInt> {
        let d = self.uint()?;
        if !self.eat(b')') {
            return self.fail("expected `)` after radicand");
        }
        Ok(d)
    }

    fn add_radical(&self, body: &mut Body, coeff: BigInt, d: BigInt) -> Result<()> {
        match &body.d {
            Some(prev) if *prev != d => self.fail("two different radicands"),
            _ => {
                body.d = Some(d);
                body.b += coeff;
                Ok(())
            }
        }
    }
}
