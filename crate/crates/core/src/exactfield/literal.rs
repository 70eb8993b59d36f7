//! Cyclotomic literals.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := "-" factor | atom ("^" "-"? int)?
//! atom    := int ("/" int)? | "zeta(" int ")" | "(" expr ")"
//! ```
//!
//! The canonical printed form `[c0, c1, ...] @ zeta(n)` is accepted as well.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cyclotomic::{CycNumber, Ctx};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a Ctx,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Literal { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
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

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits"))
    }

    fn small_int(&mut self) -> Result<u32> {
        let pos = self.pos;
        let v = self.int()?;
        u32::try_from(v).or_else(|_| err(pos, "integer too large"))
    }

    fn expr(&mut self) -> Result<CycNumber> {
        let mut acc = self.term()?;
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

    fn term(&mut self) -> Result<CycNumber> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CycNumber> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.small_int()?;
            let p = base.pow(e);
            return if neg { p.inv() } else { Ok(p) };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<CycNumber> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return err(self.pos, "expected ')'");
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.int()?;
                let save = self.pos;
                let den = if self.eat(b'/') {
                    let d = self.int()?;
                    if d == BigInt::from(0) {
                        return err(save, "zero denominator");
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(CycNumber::from_rational(self.ctx, BigRational::new(num, den)))
            }
            Some(b'z') => {
                let start = self.pos;
                if !self.src[self.pos..].starts_with(b"zeta") {
                    return err(start, "unknown identifier");
                }
                self.pos += 4;
                if !self.eat(b'(') {
                    return err(self.pos, "expected '(' after zeta");
                }
                let m = self.small_int()?;
                if !self.eat(b')') {
                    return err(self.pos, "expected ')'");
                }
                let n = self.ctx.conductor();
                if m == 0 || n % m != 0 {
                    return err(start, format!("zeta({m}) not representable at conductor {n}"));
                }
                Ok(CycNumber::zeta_pow(self.ctx, (n / m) as i64))
            }
            Some(_) => err(self.pos, "unexpected character"),
            None => err(self.pos, "unexpected end of literal"),
        }
    }

    fn canonical(&mut self) -> Result<CycNumber> {
        // "[c0, c1, ...] @ zeta(n)"
        self.eat(b'[');
        let mut coeffs = Vec::new();
        loop {
            let neg = self.eat(b'-');
            let num = self.int()?;
            let den = if self.eat(b'/') { self.int()? } else { BigInt::from(1) };
            let r = BigRational::new(num, den);
            coeffs.push(if neg { -r } else { r });
            if self.eat(b',') {
                continue;
            }
            if self.eat(b']') {
                break;
            }
            return err(self.pos, "expected ',' or ']'");
        }
        if !self.eat(b'@') {
            return err(self.pos, "expected '@'");
        }
        self.skip_ws();
        if !self.src[self.pos..].starts_with(b"zeta(") {
            return err(self.pos, "expected zeta(n)");
        }
        self.pos += 5;
        let n = self.small_int()?;
        if !self.eat(b')') {
            return err(self.pos, "expected ')'");
        }
        if n != self.ctx.conductor() {
            return Err(Error::ContextMismatch(n, self.ctx.conductor()));
        }
        CycNumber::from_coeffs(self.ctx, coeffs)
    }
}

/// Parse a cyclotomic literal in the given context.
pub fn parse_cyc(ctx: &Ctx, s: &str) -> Result<CycNumber> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, ctx };
    let v = if p.peek() == Some(b'[') { p.canonical()? } else { p.expr()? };
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(v)
}

/// Least conductor able to represent every `zeta(m)` occurring in `s`.
pub fn required_conductor(s: &str) -> u32 {
    let mut n = 1u32;
    let mut rest = s;
    while let Some(i) = rest.find("zeta(") {
        rest = &rest[i + 5..];
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        if let Ok(m) = digits.parse::<u32>() {
            if m > 0 {
                n = super::cyclotomic::lcm(n, m);
            }
        }
    }
    n
}
