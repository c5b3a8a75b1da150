//! Polynomial expression grammar and canonical printing.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary | '/' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::context::VarContext;
use super::mono::Mono;
use super::poly::Poly;
use super::rat::{fmt_rat, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Parsed expression tree, independent of the target ring.
#[derive(Clone, Debug)]
pub enum Expr {
    Num(Rat),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Rat),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
    ctx: &'a VarContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' {
                Expr::Add(lhs.into(), rhs.into())
            } else {
                Expr::Sub(lhs.into(), rhs.into())
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(lhs.into(), rhs.into());
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.here();
                    let rhs = self.unary()?;
                    match const_value(&rhs) {
                        Some(c) if !c.is_zero() => lhs = Expr::Div(lhs.into(), c),
                        Some(_) => {
                            return Err(Error::Syntax {
                                pos: at,
                                msg: "division by zero".into(),
                            })
                        }
                        None => {
                            return Err(Error::Syntax {
                                pos: at,
                                msg: "division only by constants".into(),
                            })
                        }
                    }
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(self.unary()?.into()))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let at = self.here();
                    self.pos += 1;
                    let e: u32 = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= 10_000)
                        .ok_or(Error::Syntax {
                            pos: at,
                            msg: "exponent too large".into(),
                        })?;
                    Ok(Expr::Pow(base.into(), e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.ctx.index_of(&name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None => Err(Error::UnknownVariable { name, pos: at }),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn const_value(e: &Expr) -> Option<Rat> {
    Some(match e {
        Expr::Num(c) => c.clone(),
        Expr::Var(_) => return None,
        Expr::Add(a, b) => const_value(a)? + const_value(b)?,
        Expr::Sub(a, b) => const_value(a)? - const_value(b)?,
        Expr::Mul(a, b) => const_value(a)? * const_value(b)?,
        Expr::Div(a, c) => const_value(a)? / c,
        Expr::Neg(a) => -const_value(a)?,
        Expr::Pow(a, e) => num_traits::pow(const_value(a)?, *e as usize),
    })
}

pub fn parse_expr(text: &str, ctx: &VarContext) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: text.len(),
        ctx,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// A ring an expression tree can be evaluated into.
pub trait ExprRing: Sized {
    type Elem: Clone;

    fn constant(&self, c: Rat) -> Self::Elem;
    fn variable(&self, i: usize) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Rat) -> Self::Elem;

    fn eval(&self, e: &Expr) -> Self::Elem {
        match e {
            Expr::Num(c) => self.constant(c.clone()),
            Expr::Var(i) => self.variable(*i),
            Expr::Add(a, b) => self.add(&self.eval(a), &self.eval(b)),
            Expr::Sub(a, b) => self.sub(&self.eval(a), &self.eval(b)),
            Expr::Mul(a, b) => self.mul(&self.eval(a), &self.eval(b)),
            Expr::Div(a, c) => self.scale(&self.eval(a), &c.recip()),
            Expr::Neg(a) => self.scale(&self.eval(a), &-Rat::one()),
            Expr::Pow(a, k) => {
                let b = self.eval(a);
                let mut acc = self.constant(Rat::one());
                for _ in 0..*k {
                    acc = self.mul(&acc, &b);
                }
                acc
            }
        }
    }
}

struct CommutativeRing<'a>(&'a Arc<VarContext>);

impl ExprRing for CommutativeRing<'_> {
    type Elem = Poly;
    fn constant(&self, c: Rat) -> Poly {
        Poly::constant(self.0, c)
    }
    fn variable(&self, i: usize) -> Poly {
        Poly::var(self.0, i)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a - b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a * b
    }
    fn scale(&self, a: &Poly, c: &Rat) -> Poly {
        a.scale(c)
    }
    fn eval(&self, e: &Expr) -> Poly {
        match e {
            Expr::Pow(a, k) => self.eval(a).pow(*k),
            _ => default_eval(self, e),
        }
    }
}

fn default_eval<R: ExprRing>(r: &R, e: &Expr) -> R::Elem {
    match e {
        Expr::Num(c) => r.constant(c.clone()),
        Expr::Var(i) => r.variable(*i),
        Expr::Add(a, b) => r.add(&r.eval(a), &r.eval(b)),
        Expr::Sub(a, b) => r.sub(&r.eval(a), &r.eval(b)),
        Expr::Mul(a, b) => r.mul(&r.eval(a), &r.eval(b)),
        Expr::Div(a, c) => r.scale(&r.eval(a), &c.recip()),
        Expr::Neg(a) => r.scale(&r.eval(a), &-Rat::one()),
        Expr::Pow(..) => unreachable!(),
    }
}

/// Parse and expand a commutative polynomial.
pub fn parse_poly(text: &str, ctx: &Arc<VarContext>) -> Result<Poly> {
    let e = parse_expr(text, ctx)?;
    Ok(CommutativeRing(ctx).eval(&e))
}

/// Canonical text of a sorted term list.
pub fn format_terms(ctx: &VarContext, terms: &[(Mono, Rat)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_mono(ctx, m);
        if mono.is_empty() {
            out.push_str(&fmt_rat(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_rat(&a));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

pub fn format_mono(ctx: &VarContext, m: &Mono) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                ctx.name(i).to_string()
            } else {
                format!("{}^{}", ctx.name(i), e)
            }
        })
        .collect();
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> Arc<VarContext> {
        VarContext::plain(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn expands_and_prints() {
        let c = ctx();
        let p = parse_poly("2*x^2 + y*z", &c).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "2*x^2 + y*z");
        assert_eq!(parse_poly("(x+y)^2 - x^2 - 2*x*y", &c).unwrap().to_string(), "y^2");
        assert!(parse_poly("x - x", &c).unwrap().is_zero());
        assert_eq!(parse_poly("-x/3 + 1/2", &c).unwrap().to_string(), "-1/3*x + 1/2");
    }

    #[test]
    fn error_positions() {
        let c = ctx();
        match parse_poly("x + w", &c) {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "w");
                assert_eq!(pos, 4);
            }
            other => panic!("{other:?}"),
        }
        match parse_poly("x + * y", &c) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("x/y", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("(x", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x^-1", &c), Err(Error::Syntax { .. })));
    }

    fn arb_poly() -> impl Strategy<Value = Vec<(Vec<u16>, i64, i64)>> {
        proptest::collection::vec(
            (proptest::collection::vec(0u16..4, 3), -9i64..10, 1i64..5),
            0..6,
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(ts in arb_poly()) {
            let c = ctx();
            let p = Poly::from_terms(&c, ts.into_iter().map(|(e, n, d)| {
                (Mono::from_slice(&e), super::super::rat::ratio(n, d))
            }));
            let s = p.to_string();
            let q = parse_poly(&s, &c).unwrap();
            prop_assert_eq!(&q, &p);
            prop_assert_eq!(q.to_string(), s);
        }
    }
}
