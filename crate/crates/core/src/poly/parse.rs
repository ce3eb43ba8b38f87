//! Text grammar for polynomials:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | 'x' index | 't' | '(' expr ')'
//! ```
//!
//! `t` is the generator of an extension field (a root of its modulus).
//! Integers are reduced modulo the characteristic.

use std::fmt;

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::ff::Field;

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug)]
enum Ast {
    Int(u32),
    Var(usize),
    Gen,
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    p: u32,
    field: &'a Field,
    max_var: usize,
}

impl Parser<'_> {
    fn location(&self, at: usize) -> (usize, usize) {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..at.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        (line, column)
    }

    fn error_at(&self, at: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(at);
        Error::Parse { line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<(usize, String)> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, self.chars[start..self.pos].iter().collect()))
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(Ast::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let Some((start, text)) = self.digits() else {
            return Err(self.error_at(self.pos, "expected exponent"));
        };
        match text.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(Ast::Pow(Box::new(base), e)),
            _ => Err(self.error_at(start, format!("exponent exceeds {MAX_EXPONENT}"))),
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let at = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error_at(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('x') => {
                self.pos += 1;
                let Some((start, text)) = self.digits() else {
                    return Err(self.error_at(self.pos, "expected variable index after 'x'"));
                };
                match text.parse::<usize>() {
                    Ok(i) if (1..=64).contains(&i) => {
                        self.max_var = self.max_var.max(i);
                        Ok(Ast::Var(i - 1))
                    }
                    _ => Err(self.error_at(start, "variable index must be in 1..=64")),
                }
            }
            Some('t') => {
                if self.field.degree() == 1 {
                    return Err(self.error_at(self.pos, "'t' requires an extension field"));
                }
                self.pos += 1;
                Ok(Ast::Gen)
            }
            Some(c) if c.is_ascii_digit() => {
                let (_, text) = self.digits().expect("digit present");
                let v = text
                    .bytes()
                    .fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % self.p as u64);
                Ok(Ast::Int(v as u32))
            }
            Some(c) => Err(self.error_at(self.pos, format!("unexpected character '{c}'"))),
            None => Err(self.error_at(at.max(self.pos), "unexpected end of input")),
        }
    }
}

fn build(ast: &Ast, field: &Field, nvars: usize) -> MultiPoly {
    match ast {
        Ast::Int(v) => MultiPoly::constant(field, nvars, field.from_int(*v as i64)),
        Ast::Var(i) => MultiPoly::var(field, nvars, *i),
        Ast::Gen => MultiPoly::constant(field, nvars, field.generator()),
        Ast::Neg(a) => -&build(a, field, nvars),
        Ast::Add(a, b) => &build(a, field, nvars) + &build(b, field, nvars),
        Ast::Sub(a, b) => &build(a, field, nvars) - &build(b, field, nvars),
        Ast::Mul(a, b) => &build(a, field, nvars) * &build(b, field, nvars),
        Ast::Pow(a, e) => build(a, field, nvars).pow(*e),
    }
}

/// Parses `text` over `field`. With `nvars = None` the arity is the largest
/// variable index used (at least 1).
pub fn parse_poly(field: &Field, text: &str, nvars: Option<usize>) -> Result<MultiPoly> {
    let mut parser =
        Parser { chars: text.chars().collect(), pos: 0, p: field.characteristic(), field, max_var: 0 };
    let ast = parser.expr()?;
    if parser.peek().is_some() {
        let c = parser.chars[parser.pos];
        return Err(parser.error_at(parser.pos, format!("unexpected character '{c}'")));
    }
    let k = match nvars {
        Some(k) if parser.max_var > k => {
            return Err(Error::ArityMismatch { expected: k, found: parser.max_var });
        }
        Some(k) => k,
        None => parser.max_var.max(1),
    };
    Ok(build(&ast, field, k))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, e)?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing graded-lex order, e.g. `x1*x2 + 1`. Extension
    /// field coefficients are printed as parenthesized polynomials in `t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, &c)) in self.terms().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let coeff = self.field().format(c);
            let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
            if m.is_one() {
                f.write_str(&coeff)?;
            } else {
                if c != self.field().one() {
                    write!(f, "{coeff}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}
