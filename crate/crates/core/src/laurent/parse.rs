//! Reader for polynomial text.
//!
//! Accepts the canonical rendering (`-2*z^2*a^5 + z^3*a^-6`) and the looser
//! hand-written notation: implicit products (`5z^6`), grouped coefficients
//! (`(z^8 - 5z^6)a^{5}`), braced or parenthesised exponents (`t^{-1/2}`,
//! `t^(13/2)`) and inverse monomials (`1/z`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{insert_term, BiLaurent, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

/// Exponents of (a, z, t), each doubled.
type Key = [i32; 3];

#[derive(Clone, Default)]
struct Poly(BTreeMap<Key, BigInt>);

impl Poly {
    fn constant(c: BigInt) -> Self {
        let mut p = Poly::default();
        insert_term(&mut p.0, [0; 3], c);
        p
    }

    fn var(i: usize) -> Self {
        let mut k = [0; 3];
        k[i] = 2;
        let mut p = Poly::default();
        p.0.insert(k, BigInt::one());
        p
    }

    fn add(&mut self, o: &Poly, sign: i32) {
        for (k, c) in &o.0 {
            insert_term(&mut self.0, *k, if sign < 0 { -c } else { c.clone() });
        }
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (k1, c1) in &self.0 {
            for (k2, c2) in &o.0 {
                insert_term(&mut out.0, [k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]], c1 * c2);
            }
        }
        out
    }

    /// Returns the single term if this is `±x^k`.
    fn unit_monomial(&self) -> Option<(Key, BigInt)> {
        if self.0.len() != 1 {
            return None;
        }
        let (k, c) = self.0.iter().next()?;
        (c.abs().is_one()).then(|| (*k, c.clone()))
    }

    fn is_constant(&self) -> bool {
        self.0.keys().all(|k| *k == [0; 3])
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(txt.parse().expect("digits parse"))
    }

    fn small_int(&mut self) -> Result<i32, ParseError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let v = self.uint()?;
        let v: i32 = match i32::try_from(v) {
            Ok(v) if v < i32::MAX / 4 => v,
            _ => return self.err("exponent out of range"),
        };
        Ok(if neg { -v } else { v })
    }

    /// Doubled exponent: `3`, `-2`, `{-1/2}`, `(13/2)`.
    fn exponent(&mut self) -> Result<i32, ParseError> {
        let close = if self.eat(b'{') {
            Some(b'}')
        } else if self.eat(b'(') {
            Some(b')')
        } else {
            None
        };
        let num = self.small_int()?;
        let den = if close.is_some() && self.eat(b'/') { self.small_int()? } else { 1 };
        if let Some(c) = close {
            self.expect(c)?;
        }
        match den {
            1 => Ok(2 * num),
            2 => Ok(num),
            _ => self.err("only integer and half-integer exponents are supported"),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = Poly::default();
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            let t = self.term()?;
            acc.add(&t, sign);
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || matches!(c, b'a' | b'z' | b't' | b'(' | b'{'))
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else if self.eat(b'/') {
                let at = self.pos;
                let f = self.factor()?;
                let Some((k, c)) = f.unit_monomial() else {
                    self.pos = at;
                    return self.err("can only divide by a monomial with coefficient ±1");
                };
                let mut inv = Poly::default();
                inv.0.insert([-k[0], -k[1], -k[2]], c);
                acc = acc.mul(&inv);
            } else if self.starts_factor() {
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e2 = self.exponent()?;
        if let Some((k, c)) = base.unit_monomial() {
            if c.is_one() || e2 % 2 == 0 {
                let sign = if c.is_negative() && (e2 / 2) % 2 != 0 { -1 } else { 1 };
                if e2 % 2 != 0 && !base.is_constant() && (k[0] != 0 || k[1] != 0) {
                    self.pos = at;
                    return self.err("half-integer exponents are only allowed on t");
                }
                let mut out = Poly::default();
                out.0.insert(
                    [k[0] * e2 / 2, k[1] * e2 / 2, k[2] * e2 / 2],
                    BigInt::from(sign),
                );
                if k.iter().any(|&x| (x * e2) % 2 != 0) {
                    self.pos = at;
                    return self.err("exponent does not land on the half-integer lattice");
                }
                return Ok(out);
            }
        }
        if e2 < 0 || e2 % 2 != 0 {
            self.pos = at;
            return self.err("a general polynomial can only be raised to a non-negative integer power");
        }
        let mut out = Poly::constant(BigInt::one());
        for _ in 0..e2 / 2 {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(self.uint()?)),
            Some(b'a') => {
                self.pos += 1;
                Ok(Poly::var(0))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(Poly::var(1))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Poly::var(2))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'{') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b'}')?;
                Ok(e)
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_generic(s: &str) -> Result<Poly, ParseError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub(super) fn parse_az(s: &str) -> Result<BiLaurent, ParseError> {
    let p = parse_generic(s)?;
    let mut out = BiLaurent::zero();
    for (k, c) in p.0 {
        if k[2] != 0 {
            return Err(ParseError { pos: 0, msg: "variable t in an (a, z) polynomial".into() });
        }
        if k[0] % 2 != 0 || k[1] % 2 != 0 {
            return Err(ParseError { pos: 0, msg: "half-integer exponent of a or z".into() });
        }
        if !c.is_zero() {
            insert_term(&mut out.terms, (k[0] / 2, k[1] / 2), c);
        }
    }
    Ok(out)
}

pub(super) fn parse_t(s: &str) -> Result<LaurentPoly, ParseError> {
    let p = parse_generic(s)?;
    let mut out = LaurentPoly::zero();
    for (k, c) in p.0 {
        if k[0] != 0 || k[1] != 0 {
            return Err(ParseError { pos: 0, msg: "variables a or z in a t polynomial".into() });
        }
        insert_term(&mut out.terms, k[2], c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loose_notation() {
        let p = parse_az("(6z^3 - 1/z - 4z - 3z^5 + z^7)a^{0} + z^2a^{-3}").unwrap();
        assert_eq!(p.coeff(0, -1), BigInt::from(-1));
        assert_eq!(p.coeff(-3, 2), BigInt::from(1));
        let q = parse_az("(3z^3 - z^1)a^{-5} + 1z^{-1}a").unwrap();
        assert_eq!(q.coeff(-5, 1), BigInt::from(-1));
        assert_eq!(q.coeff(1, -1), BigInt::from(1));
        let v = parse_t("t^{-19/2}-3t^{-17/2} + t^(1/2)").unwrap();
        assert_eq!(v.coeff(-19), BigInt::from(1));
        assert_eq!(v.coeff(1), BigInt::from(1));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_az("z^2 + * a").unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(parse_az("").is_err());
        assert!(parse_az("a^{1/2}").is_err());
        assert!(parse_t("a + t").is_err());
        assert!(parse_az("z / (1 + z)").is_err());
    }
}
