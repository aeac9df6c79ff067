//! Text form of quaternions.
//!
//! ```text
//! unit  := sign? term (('+' | '-') term)*
//! term  := coeff basis?
//! basis := 'i' | 'j' | 'k'
//! coeff := int | int 's' | '(' int ('+' | '-') int 's' ')' ('/' int)?
//! ```
//!
//! `s` stands for `sqrt(-d)`, with `d` supplied by the caller. Whitespace is
//! ignored. A missing coefficient before `s`, `i`, `j` or `k` reads as 1.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::quadratic::{QuadRat, QuadRing, SquareFreeD};
use crate::quaternion::{Basis, Quaternion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse unit literal at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
    ring: QuadRing,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sign(&mut self) -> Option<bool> {
        if self.eat('+') {
            Some(false)
        } else if self.eat('-') {
            Some(true)
        } else {
            None
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Some(s.parse().expect("ascii digits"))
    }

    fn coeff(&mut self) -> Result<QuadRat, ParseError> {
        if self.eat('(') {
            let neg = self.sign() == Some(true);
            let Some(mut a) = self.digits() else {
                return self.err("expected integer");
            };
            if neg {
                a = -a;
            }
            let Some(neg_b) = self.sign() else {
                return self.err("expected '+' or '-'");
            };
            let mut b = self.digits().unwrap_or_else(BigInt::one);
            if neg_b {
                b = -b;
            }
            if !self.eat('s') {
                return self.err("expected 's'");
            }
            if !self.eat(')') {
                return self.err("expected ')'");
            }
            let mut den = BigInt::one();
            if self.eat('/') {
                match self.digits() {
                    Some(v) if !v.is_zero() => den = v,
                    _ => return self.err("expected positive denominator"),
                }
            }
            return Ok(QuadRat::new(self.ring, a, b, den));
        }
        let n = self.digits();
        if self.eat('s') {
            return Ok(QuadRat::sqrt_multiple(
                self.ring,
                n.unwrap_or_else(BigInt::one),
            ));
        }
        match n {
            Some(n) => Ok(QuadRat::from_int(self.ring, n)),
            None if matches!(self.peek(), Some('i' | 'j' | 'k')) => Ok(QuadRat::one(self.ring)),
            None => self.err("expected coefficient"),
        }
    }

    fn basis(&mut self) -> Basis {
        match self.peek() {
            Some('i') => {
                self.pos += 1;
                Basis::I
            }
            Some('j') => {
                self.pos += 1;
                Basis::J
            }
            Some('k') => {
                self.pos += 1;
                Basis::K
            }
            _ => Basis::One,
        }
    }
}

pub fn parse_unit(d: SquareFreeD, text: &str) -> Result<Quaternion, ParseError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let ring = QuadRing::imaginary(d);
    let mut p = Parser {
        chars: &chars,
        pos: 0,
        ring,
    };
    if chars.is_empty() {
        return p.err("empty literal");
    }
    let mut acc = Quaternion::zero(d);
    let mut negative = p.sign() == Some(true);
    loop {
        let mut c = p.coeff()?;
        if negative {
            c = -&c;
        }
        let e = p.basis();
        let sum = acc.coeff(e) + &c;
        acc = acc.with_coeff(e, sum);
        if p.peek().is_none() {
            return Ok(acc);
        }
        match p.sign() {
            Some(neg) => negative = neg,
            None => return p.err("expected '+' or '-'"),
        }
    }
}

/// Coefficient text without its leading sign, plus that sign.
fn format_coeff(c: &QuadRat) -> (bool, String) {
    let (a, b, den) = (c.a(), c.b(), c.den());
    if den.is_one() && b.is_zero() {
        return (a.is_negative(), a.abs().to_string());
    }
    if den.is_one() && a.is_zero() {
        return (b.is_negative(), format!("{}s", b.abs()));
    }
    let op = if b.is_negative() { '-' } else { '+' };
    let body = format!("({a}{op}{}s)", b.abs());
    if den.is_one() {
        (false, body)
    } else {
        (false, format!("{body}/{den}"))
    }
}

/// Canonical literal, e.g. `6s+15i+5j+1k`. Parses back to the same value.
pub fn format_unit(u: &Quaternion) -> String {
    let mut out = String::new();
    for e in Basis::ALL {
        let c = u.coeff(e);
        if c.is_zero() {
            continue;
        }
        let (neg, body) = format_coeff(c);
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        out.push_str(&body);
        if e != Basis::One {
            out.push_str(e.symbol());
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
