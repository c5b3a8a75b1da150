//! The Weyl algebra `D_n[S]` in normal order (every `x` left of every `d`,
//! `S` central), left Gröbner bases, symbols, the action on `F^S` and the
//! formal adjoint.

mod fs;
mod ideal;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gb::engine::weyl_mono_mul;
use crate::ring::parse::parse_expr;
use crate::ring::{
    BlockKind, ExprRing, Mono, Poly, Rat, VarContext, GRADING_ORDER, GRADING_TOTAL_ORDER,
};

pub use fs::{act_on_poly, apply_to_fs, FSAction, FSElement};
pub use ideal::WeylIdeal;

/// Normal-ordered element of a Weyl algebra with central parameters.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylOp(Poly);

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl WeylOp {
    /// Reads the exponent vectors of `p` as normal-ordered monomials.
    pub fn from_poly(p: Poly) -> Self {
        WeylOp(p)
    }

    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        WeylOp(Poly::zero(ctx))
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        WeylOp(Poly::one(ctx))
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rat) -> Self {
        WeylOp(Poly::constant(ctx, c))
    }

    pub fn var(ctx: &Arc<VarContext>, i: usize) -> Self {
        WeylOp(Poly::var(ctx, i))
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        self.0.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        WeylOp(self.0.scale(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = WeylOp::one(self.ctx());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Highest total `d`-degree (order of the operator); `-1` for zero.
    pub fn order(&self) -> i64 {
        let ds = self.ctx().vars_of_kind(BlockKind::DX);
        self.0
            .terms()
            .iter()
            .map(|(m, _)| m.degree_in(&ds) as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Commutator `[self, other]`.
    pub fn bracket(&self, other: &WeylOp) -> WeylOp {
        &(self * other) - &(other * self)
    }

    /// Substitute a central or `x` variable by a polynomial free of `d`.
    pub fn substitute(&self, var: usize, q: &Poly) -> WeylOp {
        WeylOp(self.0.substitute(var, q))
    }

    /// Evaluate central parameters at rationals (`vals[k]` for the k-th S variable).
    pub fn specialize_s(&self, vals: &[Rat]) -> WeylOp {
        let svars = self.ctx().vars_of_kind(BlockKind::S);
        let mut p = self.0.clone();
        for (&i, v) in svars.iter().zip(vals) {
            p = p.eval_var(i, v);
        }
        WeylOp(p)
    }

    /// `s_k ↦ s_k + 1` for every central parameter.
    pub fn shift_s(&self) -> WeylOp {
        let ctx = self.ctx().clone();
        let mut p = self.0.clone();
        for i in ctx.vars_of_kind(BlockKind::S) {
            p = p.substitute(i, &(&Poly::var(&ctx, i) + &Poly::one(&ctx)));
        }
        WeylOp(p)
    }
}

/// Normal-ordered product.
pub fn weyl_multiply(p: &WeylOp, q: &WeylOp) -> WeylOp {
    let ctx = p.ctx();
    let pairs = ctx.weyl_pairs();
    let mut acc: BTreeMap<Mono, Rat> = BTreeMap::new();
    for (m, c) in p.0.terms() {
        for (n, d) in q.0.terms() {
            let cd = c * d;
            for (mono, k) in weyl_mono_mul(&pairs, m, n) {
                *acc.entry(mono).or_insert_with(Rat::zero) += &cd * Rat::from_integer(k);
            }
        }
    }
    WeylOp(Poly::from_terms(ctx, acc))
}

impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        weyl_multiply(self, rhs)
    }
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        WeylOp(&self.0 + &rhs.0)
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        WeylOp(&self.0 - &rhs.0)
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        WeylOp(-&self.0)
    }
}

struct WeylRing<'a>(&'a Arc<VarContext>);

impl ExprRing for WeylRing<'_> {
    type Elem = WeylOp;
    fn constant(&self, c: Rat) -> WeylOp {
        WeylOp::constant(self.0, c)
    }
    fn variable(&self, i: usize) -> WeylOp {
        WeylOp::var(self.0, i)
    }
    fn add(&self, a: &WeylOp, b: &WeylOp) -> WeylOp {
        a + b
    }
    fn sub(&self, a: &WeylOp, b: &WeylOp) -> WeylOp {
        a - b
    }
    fn mul(&self, a: &WeylOp, b: &WeylOp) -> WeylOp {
        a * b
    }
    fn scale(&self, a: &WeylOp, c: &Rat) -> WeylOp {
        a.scale(c)
    }
}

/// Parses an operator expression; products are Weyl products, so `dx*x`
/// normalizes to `x*dx + 1`.
pub fn parse_weyl(text: &str, ctx: &Arc<VarContext>) -> Result<WeylOp> {
    let e = parse_expr(text, ctx)?;
    Ok(WeylRing(ctx).eval(&e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Filtration {
    /// `d` weight 1, everything else 0.
    Order,
    /// `d` and `S` weight 1.
    TotalOrder,
}

/// Standard symbol context for a Weyl context: `dv` becomes `y_v`.
pub fn symbol_context(ctx: &VarContext) -> Result<Arc<VarContext>> {
    ctx.symbol_context(|d| format!("y_{}", d.strip_prefix('d').unwrap_or(d)))
}

/// Principal symbol: top-weight part with each `d_i` read as `y_i` in `target`
/// (a context of equal layout, e.g. from [`symbol_context`]).
pub fn gr_symbol(p: &WeylOp, filt: Filtration, target: &Arc<VarContext>) -> Result<Poly> {
    let grading = match filt {
        Filtration::Order => {
            if p.0.involves_any(&p.ctx().vars_of_kind(BlockKind::S)) {
                return Err(Error::FiltrationMismatch(
                    "the order filtration needs an operator free of S".into(),
                ));
            }
            GRADING_ORDER
        }
        Filtration::TotalOrder => GRADING_TOTAL_ORDER,
    };
    if target.nvars() != p.ctx().nvars() {
        return Err(Error::FiltrationMismatch("symbol context arity".into()));
    }
    Ok(p.0.initial_form(grading)?.relabel(target))
}

/// Formal adjoint `x^a d^b S^w ↦ (-d)^b x^a S^w`.
pub fn transpose_tau(p: &WeylOp) -> WeylOp {
    let ctx = p.ctx();
    let pairs = ctx.weyl_pairs();
    let mut acc: BTreeMap<Mono, Rat> = BTreeMap::new();
    for (m, c) in p.0.terms() {
        let mut dpart = Mono::one(ctx.nvars());
        let mut xpart = m.clone();
        let mut deg = 0u32;
        for &(_, d) in &pairs {
            dpart.set(d, m.get(d));
            xpart.set(d, 0);
            deg += m.get(d) as u32;
        }
        let sign = if deg % 2 == 1 { -Rat::one() } else { Rat::one() };
        let cs = c * sign;
        for (mono, k) in weyl_mono_mul(&pairs, &dpart, &xpart) {
            *acc.entry(mono).or_insert_with(Rat::zero) += &cs * Rat::from_integer(k);
        }
    }
    WeylOp(Poly::from_terms(ctx, acc))
}

/// Context `x_1..x_n, dx_1..dx_n, params` used throughout.
pub fn weyl_context<S: AsRef<str>>(xs: &[S], params: &[S]) -> Result<Arc<VarContext>> {
    let xs: Vec<String> = xs.iter().map(|s| s.as_ref().to_string()).collect();
    let ds: Vec<String> = xs.iter().map(|s| format!("d{s}")).collect();
    let ps: Vec<String> = params.iter().map(|s| s.as_ref().to_string()).collect();
    let mut blocks = vec![(BlockKind::X, "X", xs), (BlockKind::DX, "DX", ds)];
    if !ps.is_empty() {
        blocks.push((BlockKind::S, "S", ps));
    }
    VarContext::new(&blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx1() -> Arc<VarContext> {
        weyl_context(&["x"], &["s"]).unwrap()
    }

    fn w(s: &str, c: &Arc<VarContext>) -> WeylOp {
        parse_weyl(s, c).unwrap()
    }

    #[test]
    fn products() {
        let c = ctx1();
        assert_eq!(w("dx*x", &c).to_string(), "x*dx + 1");
        assert_eq!(w("dx^2*x", &c).to_string(), "x*dx^2 + 2*dx");
        assert_eq!(w("(x*dx)*(x*dx)", &c).to_string(), "x^2*dx^2 + x*dx");
    }

    #[test]
    fn symbols() {
        let c = ctx1();
        let sc = symbol_context(&c).unwrap();
        let p = w("x*dx^2 + dx + s^2", &c);
        assert_eq!(gr_symbol(&p, Filtration::TotalOrder, &sc).unwrap().to_string(), "x*y_x^2 + s^2");
        assert_eq!(
            gr_symbol(&w("x*dx + 1", &c), Filtration::Order, &sc).unwrap().to_string(),
            "x*y_x"
        );
        assert!(matches!(
            gr_symbol(&w("x*dx - s", &c), Filtration::Order, &sc),
            Err(Error::FiltrationMismatch(_))
        ));
    }

    #[test]
    fn adjoint() {
        let c = ctx1();
        assert_eq!(transpose_tau(&w("x*dx", &c)).to_string(), "-x*dx - 1");
        assert_eq!(transpose_tau(&w("dx^2", &c)).to_string(), "dx^2");
        assert_eq!(transpose_tau(&w("s*dx", &c)).to_string(), "-dx*s");
    }
}
