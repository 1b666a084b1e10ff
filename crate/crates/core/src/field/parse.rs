//! Expression syntax for field elements: `+ - * / ^`, parentheses, integer
//! literals, the identifiers `t`, `z`, `u1..uN`, and `O(...)` precision terms.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{Bounded, FieldKind, FieldSpec, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Int(lit.parse().map_err(|_| Error::Parse(lit.clone()))?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

enum Term {
    Val(Scalar),
    BigO(i64),
}

struct Parser<'a> {
    spec: &'a Arc<FieldSpec>,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = Scalar::zero(self.spec);
        let mut big_o: Option<i64> = None;
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            match self.term()? {
                Term::Val(v) => {
                    let v = if sign < 0 { v.neg() } else { v };
                    acc = match acc.checked_add(&v)? {
                        Bounded::Value(x) => x,
                        Bounded::Negligible(_) => Scalar::zero(self.spec),
                    };
                }
                Term::BigO(a) => big_o = Some(big_o.map_or(a, |b| b.min(a))),
            }
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        match big_o {
            None => Ok(acc),
            Some(a) => match acc.truncate_abs(a) {
                Bounded::Value(v) => Ok(v),
                Bounded::Negligible(_) => Err(Error::Parse(format!("value vanishes modulo O(precision {a})"))),
            },
        }
    }

    fn term(&mut self) -> Result<Term> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "O") {
            self.pos += 1;
            self.expect('(')?;
            let inner = self.expr()?;
            self.expect(')')?;
            let v = inner.valuation().ok_or_else(|| Error::Parse("O(0) is meaningless".into()))?;
            return Ok(Term::BigO(v));
        }
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?)?;
            } else if self.eat('/') {
                acc = acc.div(&self.power()?)?;
            } else {
                return Ok(Term::Val(acc));
            }
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let e: i64 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                base.pow(if neg { -e } else { e })
            }
            _ => Err(Error::Parse("exponent must be an integer literal".into())),
        }
    }

    fn atom(&mut self) -> Result<Scalar> {
        let s = self.spec;
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Scalar::from_bigint(s, &n))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                match id.as_str() {
                    "t" if s.kind != FieldKind::Padic => Ok(Scalar::uniformizer(s)),
                    "z" => Scalar::residue_generator(s),
                    _ if id.starts_with('u') => {
                        let i: usize = id[1..].parse().map_err(|_| Error::Parse(format!("unknown identifier `{id}`")))?;
                        Scalar::variable(s, i)
                    }
                    _ => Err(Error::Parse(format!("unknown identifier `{id}`"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub(crate) fn parse_scalar(spec: &Arc<FieldSpec>, s: &str) -> Result<Scalar> {
    let mut p = Parser { spec, toks: lex(s)?, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(v)
}
