//! Text grammar for scalars: integers, rationals `a/b`, variables by name,
//! `+ - * / ^`, parentheses, and `sqrt(...)` introducing the (single)
//! quadratic extension of an expression. The `Display` implementations of
//! the scalar types emit this same grammar, so printed values re-parse.

use num::BigInt;

use super::context::Context;
use super::poly::Polynomial;
use super::ratfun::RationalFunction;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Int(s.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Name(s));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a Context,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, got {got:?}"))),
        }
    }

    fn combine<F>(&self, a: Scalar, b: Scalar, f: F) -> Result<Scalar>
    where
        F: FnOnce(&Scalar, &Scalar) -> Scalar,
    {
        if let (Some(da), Some(db)) = (a.discriminant(), b.discriminant()) {
            if da != db {
                return Err(Error::MixedDiscriminant);
            }
        }
        Ok(f(&a, &b))
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = self.combine(acc, rhs, |a, b| a.add_ref(b))?;
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = self.combine(acc, rhs, |a, b| a.sub_ref(b))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.unary()?;
                    acc = self.combine(acc, rhs, |a, b| a.mul_ref(b))?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.unary()?;
                    if let (Some(da), Some(db)) = (acc.discriminant(), rhs.discriminant()) {
                        if da != db {
                            return Err(Error::MixedDiscriminant);
                        }
                    }
                    acc = acc.div_ref(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.next();
            Ok(self.unary()?.neg_ref())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            match self.next() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse("exponent out of range".into()))?;
                    Ok(base.pow(e))
                }
                got => Err(Error::Parse(format!(
                    "expected integer exponent, got {got:?}"
                ))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Scalar::from(Polynomial::constant(
                self.ctx,
                num::BigRational::from_integer(n),
            ))),
            Some(Tok::Name(name)) if name == "sqrt" => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                match inner {
                    Scalar::Rat(r) => Scalar::sqrt_rat(&r),
                    Scalar::Ext(_) => Err(Error::Parse(
                        "nested sqrt: the radicand must be rational".into(),
                    )),
                }
            }
            Some(Tok::Name(name)) => Scalar::var(self.ctx, &name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            got => Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
    }
}

/// Parse one expression of the grammar against a variable context.
pub fn parse_scalar(ctx: &Context, input: &str) -> Result<Scalar> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, ctx };
    let s = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(s)
}

/// Parse an expression required to be a polynomial.
pub fn parse_poly(ctx: &Context, input: &str) -> Result<Polynomial> {
    match parse_scalar(ctx, input)? {
        Scalar::Rat(r) => r
            .as_poly()
            .cloned()
            .ok_or_else(|| Error::Parse("expected a polynomial, found a denominator".into())),
        Scalar::Ext(_) => Err(Error::Parse("expected a polynomial, found sqrt".into())),
    }
}

/// Parse an expression required to be a rational function (no radical).
pub fn parse_ratfun(ctx: &Context, input: &str) -> Result<RationalFunction> {
    match parse_scalar(ctx, input)? {
        Scalar::Rat(r) => Ok(r),
        Scalar::Ext(_) => Err(Error::Parse("expected a rational function, found sqrt".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(&["q1", "q2", "p1", "p2", "gamma1", "gamma2"]).unwrap()
    }

    #[test]
    fn parses_hamiltonian() {
        let c = ctx();
        let h = parse_scalar(
            &c,
            "p1^2 + p2^2 + gamma1*(q1*p1 + q2*p2) + gamma2*(q1*p1 + q2*p2)^2",
        )
        .unwrap();
        let printed = format!("{h}");
        let reparsed = parse_scalar(&c, &printed).unwrap();
        assert!(h.equals(&reparsed));
    }

    #[test]
    fn parses_rational_coefficients() {
        let c = ctx();
        let s = parse_scalar(&c, "1/2*q1 - 3/4").unwrap();
        let printed = format!("{s}");
        assert!(parse_scalar(&c, &printed).unwrap().equals(&s));
    }

    #[test]
    fn parses_sqrt_and_roundtrips() {
        let c = ctx();
        let s = parse_scalar(&c, "q2 / sqrt(1 + gamma2*q1^2)").unwrap();
        assert!(!s.is_rational());
        let printed = format!("{s}");
        let back = parse_scalar(&c, &printed).unwrap();
        assert!(s.equals(&back));
    }

    #[test]
    fn rejects_mixed_radicands() {
        let c = ctx();
        assert!(parse_scalar(&c, "sqrt(q1) + sqrt(q2)").is_err());
    }

    #[test]
    fn rejects_unknown_variable() {
        let c = ctx();
        assert!(parse_scalar(&c, "q1 + z9").is_err());
    }
}
