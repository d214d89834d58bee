//! Parsing of polynomial text.
//!
//! Accepts the canonical form written by `Display` as well as ordinary
//! infix input: `+ - * ^`, parentheses, integer literals and division by
//! constant expressions, e.g. `3/4*x^2 - (y + 1)*x`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::RationalPoly;
use crate::error::{usage, Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let ch = cs[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Int(lit.parse().expect("digits")));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return usage(format!("unexpected character `{ch}` in polynomial"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                match d.constant_value() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    _ => return usage("division is only allowed by nonzero constants"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let n: u32 = n.try_into().map_err(|_| Error::Usage("exponent too large".into()))?;
                    Ok(base.pow(n))
                }
                _ => usage("exponent must be a non-negative integer literal"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RationalPoly> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RationalPoly::constant(self.vars, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if !self.vars.contains(&name.as_str()) {
                    return usage(format!("unknown variable `{name}`"));
                }
                RationalPoly::var(self.vars, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return usage("missing `)`");
                }
                Ok(e)
            }
            Some(t) => usage(format!("unexpected token {t:?}")),
            None => usage("unexpected end of polynomial"),
        }
    }
}

impl RationalPoly {
    /// Parse `text` as a polynomial over exactly `vars`.
    pub fn parse(text: &str, vars: &[&str]) -> Result<RationalPoly> {
        let toks = tokenize(text)?;
        let mut p = Parser { toks, pos: 0, vars };
        let out = p.expr()?;
        if p.pos != p.toks.len() {
            return usage(format!("trailing input at token {}", p.pos));
        }
        // Keep the requested variable order even when some are unused.
        out.with_vars(&vars.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    }
}

/// Parses with variables in order of first appearance.
impl FromStr for RationalPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        for t in tokenize(s)? {
            if let Tok::Ident(n) = t {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        RationalPoly::parse(s, &refs)
    }
}

/// Parse `a/b`, `a` or a signed integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Usage(format!("`{s}` is not a rational of the form a/b"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}
