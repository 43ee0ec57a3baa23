//! Text grammar for Laurent polynomials (and the `+ c*z` extension used for
//! Virasoro elements).
//!
//! Terms are `c`, `t^k`, or `c*t^k`, joined by `+`/`-`; `k` is any integer and
//! `c` a rational like `3/4`. Whitespace is insignificant. Example:
//! `3*t^-2 + t - 5/2`.

use num::{One, Zero};

use super::{LaurentPoly, Rational};
use crate::{Error, Result};

/// Parses an exact rational: `5`, `-5`, `3/4`, `-3/4`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    t.parse::<Rational>()
        .map_err(|e| Error::parse(0, format!("invalid rational `{}`: {}", t, e)))
}

/// Parses the Laurent polynomial grammar.
pub fn parse_laurent(s: &str) -> Result<LaurentPoly> {
    let (poly, z) = parse_vir_terms(s)?;
    if !z.is_zero() {
        return Err(Error::parse(0, "`z` is not allowed in a plain polynomial"));
    }
    Ok(poly)
}

/// Parses the extended grammar with optional `c*z` terms. Returns the field
/// coefficient polynomial and the total `z` coefficient.
pub fn parse_vir_terms(s: &str) -> Result<(LaurentPoly, Rational)> {
    let mut lex = Lexer::new(s);
    let mut poly = LaurentPoly::zero();
    let mut central = Rational::zero();

    lex.skip_ws();
    if lex.peek().is_none() {
        return Err(Error::parse(lex.pos, "empty expression"));
    }

    let mut first = true;
    loop {
        lex.skip_ws();
        let sign = match lex.peek() {
            Some('+') => {
                lex.bump();
                Rational::one()
            }
            Some('-') => {
                lex.bump();
                -Rational::one()
            }
            Some(_) if first => Rational::one(),
            Some(c) => {
                return Err(Error::parse(lex.pos, format!("expected `+` or `-`, found `{}`", c)));
            }
            None => break,
        };
        first = false;
        lex.skip_ws();
        let term = lex.term()?;
        match term {
            Term::Field { degree, coeff } => poly.add_term(degree, sign * coeff),
            Term::Central { coeff } => central += sign * coeff,
        }
        lex.skip_ws();
        if lex.peek().is_none() {
            break;
        }
    }
    Ok((poly, central))
}

enum Term {
    Field { degree: i64, coeff: Rational },
    Central { coeff: Rational },
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    /// One term: `c`, `t`, `t^k`, `c*t^k`, `z`, or `c*z`.
    fn term(&mut self) -> Result<Term> {
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.number()?;
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                self.skip_ws();
            } else {
                return Ok(Term::Field { degree: 0, coeff: c });
            }
            c
        } else {
            Rational::one()
        };
        match self.peek() {
            Some('t') => {
                self.bump();
                let degree = if self.peek() == Some('^') {
                    self.bump();
                    self.integer()?
                } else {
                    1
                };
                Ok(Term::Field { degree, coeff })
            }
            Some('z') => {
                self.bump();
                Ok(Term::Central { coeff })
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("expected `t` or `z`, found `{}`", c),
            )),
            None => Err(Error::parse(self.pos, "unexpected end of term")),
        }
    }

    /// Unsigned rational `a` or `a/b` (signs are handled at the term level).
    fn number(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        if self.peek() == Some('/') {
            self.bump();
            let start = self.pos;
            let den = self.digits()?;
            if den.is_zero() {
                return Err(Error::parse(start, "zero denominator"));
            }
            Ok(num / den)
        } else {
            Ok(num)
        }
    }

    fn digits(&mut self) -> Result<Rational> {
        let start = self.pos;
        let mut s = String::new();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        if s.is_empty() {
            return Err(Error::parse(start, "expected digits"));
        }
        s.parse::<Rational>()
            .map_err(|e| Error::parse(start, format!("invalid number: {}", e)))
    }

    /// Signed integer exponent.
    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let mut s = String::new();
        if self.peek() == Some('-') || self.peek() == Some('+') {
            s.push(self.bump().unwrap());
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        s.parse::<i64>()
            .map_err(|_| Error::parse(start, "invalid integer exponent"))
    }
}
