//! A small expression parser for polynomial input.
//!
//! Syntax: terms joined by `+`/`-`, factors joined by `*`, powers with `^`,
//! integer or rational (`3/4`) constants, and variables named like `x`,
//! `x(3)`, or `x(1)'` (indexed, with optional trailing primes). There is no
//! implicit multiplication and no parenthesized grouping — the `(i)` after an
//! identifier is part of its name. Printing a polynomial and parsing it back
//! is the identity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Polynomial;
use crate::ring::PolyRing;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits parse as BigInt");
                toks.push((start, Tok::Number(n)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                // optional (index)
                if i < bytes.len() && bytes[i] == b'(' {
                    let close = bytes[i..]
                        .iter()
                        .position(|&b| b == b')')
                        .ok_or_else(|| syntax(i, "unclosed '(' in variable name"))?;
                    let inside = &src[i + 1..i + close];
                    if inside.is_empty() || !inside.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(syntax(i, "variable index must be a number"));
                    }
                    i += close + 1;
                }
                // optional primes
                while i < bytes.len() && bytes[i] == b'\'' {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
            }
            other => return Err(syntax(i, format!("unexpected character '{other}'"))),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    ring: &'a PolyRing,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                negate = true;
                self.bump();
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let at = self.here();
            match self.bump().cloned() {
                Some(Tok::Number(n)) => {
                    let e = u32::try_from(&n)
                        .map_err(|_| syntax(at, "exponent out of range"))?;
                    return base.pow(e);
                }
                _ => return Err(syntax(at, "expected integer exponent after '^'")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial> {
        let at = self.here();
        match self.bump().cloned() {
            Some(Tok::Number(n)) => {
                // optional rational constant p/q
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let at_den = self.here();
                    match self.bump().cloned() {
                        Some(Tok::Number(d)) => {
                            if d.is_zero() {
                                return Err(syntax(at_den, "zero denominator"));
                            }
                            return Polynomial::constant(self.ring, BigRational::new(n, d));
                        }
                        _ => return Err(syntax(at_den, "expected denominator after '/'")),
                    }
                }
                Polynomial::constant(self.ring, BigRational::from_integer(n))
            }
            Some(Tok::Ident(name)) => match self.ring.var_index(&name) {
                Some(i) => Ok(Polynomial::variable(self.ring, i)),
                None => Err(Error::UnknownVariable { name }),
            },
            Some(tok) => Err(syntax(at, format!("unexpected token {tok:?}"))),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parse one expression against a fixed ring.
pub fn parse_in_ring(ring: &PolyRing, src: &str) -> Result<Polynomial> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ring,
        end: src.len(),
    };
    if p.peek().is_none() {
        return Err(syntax(0, "empty expression"));
    }
    let poly = p.expr()?;
    if p.pos < toks.len() {
        return Err(syntax(p.here(), "trailing input after expression"));
    }
    Ok(poly)
}

/// Variable names appearing in `src`, in first-appearance order.
pub fn variables_in(src: &str) -> Result<Vec<String>> {
    let mut seen = Vec::new();
    for (_, tok) in lex(src)? {
        if let Tok::Ident(name) = tok {
            if !seen.contains(&name) {
                seen.push(name);
            }
        }
    }
    Ok(seen)
}

/// Parse several expressions into a shared ring whose variables are ordered
/// by first appearance across all sources.
pub fn parse_polynomials(field: FieldSpec, sources: &[&str]) -> Result<(PolyRing, Vec<Polynomial>)> {
    let mut names: Vec<String> = Vec::new();
    for src in sources {
        for name in variables_in(src)? {
            if !names.contains(&name) {
                names.push(name);
            }
        }
    }
    if names.is_empty() {
        // Constant-only input still needs a ring to live in.
        names.push("x".to_string());
    }
    let ring = PolyRing::new(field, names)?;
    let polys = sources
        .iter()
        .map(|src| parse_in_ring(&ring, src))
        .collect::<Result<Vec<_>>>()?;
    Ok((ring, polys))
}

/// Strip comments (`#` to end of line) and blank lines from generator-list
/// input; returns the surviving lines.
pub fn strip_input_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(|line| match line.find('#') {
            Some(i) => line[..i].trim(),
            None => line.trim(),
        })
        .filter(|line| !line.is_empty())
        .collect()
}
