//! Polynomial expressions on the command line, e.g. `x^3 + alpha` or
//! `lambda^3 - 1/2*a`.
//!
//! Grammar: sums and differences of products; factors are numbers (integers
//! or decimals), identifiers, parenthesized expressions, powers with a
//! nonnegative integer exponent, and quotients by nonzero rational constants.
//! Juxtaposition multiplies (`2x`). Every identifier other than `x` becomes a
//! parameter.

use std::collections::BTreeSet;

use bcpair_core::rat::Rat;
use bcpair_core::{CoefPoly, ParamSet};
use num_traits::{Pow, Zero};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Op(char),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rat),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_decimal(&text).ok_or_else(|| format!("bad number {text:?}"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Option<Rat> {
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if (int.is_empty() && frac.is_empty()) || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: num_bigint::BigInt = digits.parse().ok()?;
    let d = num_bigint::BigInt::from(10).pow(frac.len() as u32);
    Some(Rat::new(n, d))
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
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

    fn sum(&mut self) -> Result<Expr, String> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let e = u32::try_from(n.to_integer()).map_err(|_| "exponent out of range".to_string())?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err("exponent must be a nonnegative integer".into()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(inner)
            }
            Some(Tok::Op(c)) => Err(format!("unexpected {c:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

impl Expr {
    pub fn parse(input: &str) -> Result<Expr, CliError> {
        let err = |msg: String| CliError::Expr { input: input.to_string(), msg };
        let toks = tokenize(input).map_err(err)?;
        let mut p = Parser { toks, pos: 0 };
        let e = p.sum().map_err(err)?;
        if p.pos != p.toks.len() {
            return Err(err(format!("unexpected {:?}", p.toks[p.pos])));
        }
        Ok(e)
    }

    /// Identifiers other than `x`.
    pub fn params(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                if v != "x" {
                    out.insert(v.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.params(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }

    pub fn eval(&self, ps: &ParamSet) -> Result<CoefPoly, String> {
        Ok(match self {
            Expr::Num(n) => CoefPoly::constant(ps, n.clone()),
            Expr::Var(v) if v == "x" => CoefPoly::x(ps),
            Expr::Var(v) => CoefPoly::param(ps, v).map_err(|e| e.to_string())?,
            Expr::Neg(a) => -a.eval(ps)?,
            Expr::Add(a, b) => &a.eval(ps)? + &b.eval(ps)?,
            Expr::Sub(a, b) => &a.eval(ps)? - &b.eval(ps)?,
            Expr::Mul(a, b) => &a.eval(ps)? * &b.eval(ps)?,
            Expr::Div(a, b) => {
                let d = b.eval(ps)?.as_rational().filter(|d| !d.is_zero());
                let d = d.ok_or("division only by nonzero rational constants")?;
                a.eval(ps)?.scale(&d.recip())
            }
            Expr::Pow(a, e) => a.eval(ps)?.pow(*e),
        })
    }
}

/// Parses several expressions over one shared, sorted parameter set.
pub fn parse_polys(inputs: &[&str]) -> Result<(ParamSet, Vec<CoefPoly>), CliError> {
    let exprs = inputs.iter().map(|s| Expr::parse(s)).collect::<Result<Vec<_>, _>>()?;
    let mut names = BTreeSet::new();
    for e in &exprs {
        e.params(&mut names);
    }
    let ps = ParamSet::new(names.iter().map(String::as_str))?;
    let polys = exprs
        .iter()
        .zip(inputs)
        .map(|(e, s)| e.eval(&ps).map_err(|msg| CliError::Expr { input: s.to_string(), msg }))
        .collect::<Result<_, _>>()?;
    Ok((ps, polys))
}
