//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! sum    := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' sum ')'
//! ```
//! Identifiers are ambient variables or the field generator (the transcendental of 𝔽p(t)).
//! Division is only allowed by nonzero field elements, so `3/2*x` and `x/(t+1)` parse.

use std::sync::Arc;

use num_bigint::BigInt;

use super::field::Field;
use super::poly::Polynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Input(format!("unexpected character '{}' at position {}", c, i)));
        }
    }
    Ok(out)
}

struct Parser<'a, K: Field> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ctx: &'a K::Ctx,
    vars: &'a Arc<Vec<String>>,
    src: &'a str,
}

impl<'a, K: Field> Parser<'a, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        let at = self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.src.len());
        Err(Error::Input(format!("{} at position {} in \"{}\"", msg, at, self.src)))
    }

    fn sum(&mut self) -> Result<Polynomial<K>> {
        let mut neg = false;
        if let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            neg = *c == '-';
            self.pos += 1;
        }
        let first = self.term()?;
        let mut acc = if neg { first.neg() } else { first };
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let minus = *c == '-';
            self.pos += 1;
            let t = self.term()?;
            acc = if minus { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial<K>> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let div = *c == '/';
            self.pos += 1;
            let rhs = self.unary()?;
            if div {
                if !rhs.is_constant() {
                    return self.err("division by a non-constant expression");
                }
                match rhs.constant_term().inv() {
                    Some(i) => acc = acc.scale(&i),
                    None => return self.err("division by zero"),
                }
            } else {
                acc = acc.mul(&rhs);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial<K>> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial<K>> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Input(format!("exponent too large in \"{}\"", self.src)))?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<K>> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.ctx, self.vars, K::from_bigint(self.ctx, &n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(Polynomial::var_at(self.ctx, self.vars, i))
                } else if let Some(c) = K::transcendental(self.ctx, &name, 1) {
                    Ok(Polynomial::constant(self.ctx, self.vars, c))
                } else {
                    self.pos -= 1;
                    self.err(&format!("unknown variable {}", name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

impl<K: Field> Polynomial<K> {
    /// Parses `text` over the given field context and ambient variables.
    pub fn parse(ctx: &K::Ctx, vars: &Arc<Vec<String>>, text: &str) -> Result<Self> {
        let toks = tokenize(text)?;
        if toks.is_empty() {
            return Err(Error::Input("empty polynomial".into()));
        }
        let mut p = Parser::<K> { toks, pos: 0, ctx, vars, src: text };
        let r = p.sum()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(r)
    }

    /// Parses a scalar (an expression without ambient variables).
    pub fn parse_scalar(ctx: &K::Ctx, text: &str) -> Result<K> {
        let empty = Arc::new(Vec::new());
        let p = Self::parse(ctx, &empty, text)?;
        Ok(p.constant_term())
    }
}
