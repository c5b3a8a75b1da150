use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::context::VarContext;
use super::mono::{Exp, Mono};
use super::order::MonomialOrder;
use super::rat::{content, Rat};
use crate::error::Result;

/// Degree-then-reverse-lex comparison on full exponent vectors; the canonical
/// term order for storage and printing.
pub fn grevlex_cmp(a: &Mono, b: &Mono) -> Ordering {
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.exps().iter().zip(b.exps()).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// Exact multivariate polynomial over ℚ.
///
/// Terms are kept sorted descending under grevlex with no zero coefficients,
/// so structural equality is mathematical equality.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<VarContext>,
    terms: Vec<(Mono, Rat)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Poly {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rat) -> Self {
        Self::from_terms(ctx, [(Mono::one(ctx.nvars()), c)])
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, Rat::one())
    }

    pub fn var(ctx: &Arc<VarContext>, i: usize) -> Self {
        Self::from_terms(ctx, [(Mono::var(ctx.nvars(), i, 1), Rat::one())])
    }

    pub fn monomial(ctx: &Arc<VarContext>, m: Mono, c: Rat) -> Self {
        Self::from_terms(ctx, [(m, c)])
    }

    /// Sums like terms and drops zeros.
    pub fn from_terms(ctx: &Arc<VarContext>, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut acc: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), ctx.nvars());
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
        Poly {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Trusted constructor: terms already distinct, nonzero, sorted.
    pub(crate) fn from_sorted(ctx: &Arc<VarContext>, terms: Vec<(Mono, Rat)>) -> Self {
        Poly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Rat)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Total degree; `-1` for zero.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn weighted_degree(&self, w: &[u32]) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.weighted_degree(w)).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.get(var) as u32)
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.get(var) > 0)
    }

    pub fn involves_any(&self, vars: &[usize]) -> bool {
        vars.iter().any(|&v| self.involves(v))
    }

    /// True when every term has the same `w`-degree.
    pub fn is_homogeneous(&self, w: &[u32]) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(w));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Sum of the terms of maximal weighted degree for a registered grading.
    pub fn initial_form(&self, grading: &str) -> Result<Poly> {
        let w = self.ctx.grading(grading)?.to_vec();
        Ok(self.initial_form_weights(&w))
    }

    pub fn initial_form_weights(&self, w: &[u32]) -> Poly {
        let Some(top) = self.weighted_degree(w) else {
            return self.clone();
        };
        Poly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weighted_degree(w) == top)
                .cloned()
                .collect(),
        }
    }

    /// Leading `(monomial, coefficient)` under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Mono, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        // multiplication by a monomial preserves the relative grevlex order
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        Poly::from_terms(
            &self.ctx,
            self.terms.iter().filter(|(m, _)| m.get(i) > 0).map(|(m, c)| {
                let e = m.get(i);
                let mut m = m.clone();
                m.set(i, e - 1);
                (m, c * Rat::from_integer(e.into()))
            }),
        )
    }

    /// Replace variable `i` by `q`.
    pub fn substitute(&self, i: usize, q: &Poly) -> Poly {
        let mut out = Poly::zero(&self.ctx);
        let mut powers: Vec<Poly> = vec![Poly::one(&self.ctx)];
        for (m, c) in &self.terms {
            let e = m.get(i) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * q;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.set(i, 0);
            out = &out + &powers[e].mul_mono(&rest, c);
        }
        out
    }

    /// Evaluate variable `i` at the constant `v`.
    pub fn eval_var(&self, i: usize, v: &Rat) -> Poly {
        Poly::from_terms(
            &self.ctx,
            self.terms.iter().map(|(m, c)| {
                let e = m.get(i);
                let mut m = m.clone();
                m.set(i, 0);
                (m, c * num_traits::pow(v.clone(), e as usize))
            }),
        )
    }

    /// Evaluate at a full point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc + t
        })
    }

    /// Re-express in another context through a variable map
    /// (`map[i]` = target index of source variable `i`).
    pub fn remap(&self, target: &Arc<VarContext>, map: &[usize]) -> Poly {
        Poly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut t = Mono::one(target.nvars());
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        let j = map[i];
                        t.set(j, t.get(j) + e);
                    }
                }
                (t, c.clone())
            }),
        )
    }

    /// Same exponent vectors, different context of equal arity.
    pub fn relabel(&self, target: &Arc<VarContext>) -> Poly {
        assert_eq!(target.nvars(), self.ctx.nvars());
        Poly {
            ctx: target.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Divide by the leading coefficient under grevlex.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let q = content(self.terms.iter().map(|(_, c)| c));
        let mut p = self.scale(&q.recip());
        if p.terms[0].1.is_negative() {
            p = -&p;
        }
        p
    }

    /// Exact quotient `self / q` if `q` divides `self`.
    pub fn div_exact(&self, q: &Poly) -> Option<Poly> {
        if q.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (qm, qc) = q.terms[0].clone();
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, Rat)> = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !qm.divides(&m) {
                return None;
            }
            let t = qm.quotient_of(&m);
            let k = c / &qc;
            rem = &rem - &q.mul_mono(&t, &k);
            quot.push((t, k));
        }
        Some(Poly::from_terms(&self.ctx, quot))
    }

    /// Coefficients as a polynomial in variable `i`: index = power.
    pub fn coefficients_in(&self, i: usize) -> Vec<Poly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.get(i) as usize;
            let mut r = m.clone();
            r.set(i, 0);
            out[e].push((r, c.clone()));
        }
        out.into_iter()
            .map(|ts| Poly::from_terms(&self.ctx, ts))
            .collect()
    }

    pub fn max_exponent(&self) -> Exp {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.exps().iter().copied())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_terms(&self.ctx, &self.terms))
    }
}

fn merge(a: &[(Mono, Rat)], b: &[(Mono, Rat)], negate_b: bool) -> Vec<(Mono, Rat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match grevlex_cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| {
        (m.clone(), if negate_b { -c } else { c.clone() })
    }));
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::from_sorted(&self.ctx, merge(&self.terms, &rhs.terms, false))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::from_sorted(&self.ctx, merge(&self.terms, &rhs.terms, true))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_sorted(
            &self.ctx,
            self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        )
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut acc: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                *acc.entry(m.mul(n)).or_insert_with(Rat::zero) += c * d;
            }
        }
        Poly::from_terms(&self.ctx, acc)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Determinant by cofactor expansion (small matrices only).
pub fn determinant(m: &[Vec<Poly>], ctx: &Arc<VarContext>) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::one(ctx),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero(ctx);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][j] * &determinant(&minor, ctx);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::parse_poly;
    use crate::ring::rat::rat;

    fn ctx() -> Arc<VarContext> {
        VarContext::plain(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn initial_form_examples() {
        let c = VarContext::new(&[
            (crate::ring::BlockKind::X, "X", vec!["x"]),
            (crate::ring::BlockKind::Y, "Y", vec!["y1"]),
            (crate::ring::BlockKind::S, "S", vec!["s1"]),
        ])
        .unwrap();
        let p = parse_poly("x*y1 - s1", &c).unwrap();
        assert_eq!(p.initial_form("(0,1,0)").unwrap().to_string(), "x*y1");
        let q = parse_poly("x*y1^2 + s1^2 + y1", &c).unwrap();
        assert_eq!(q.initial_form("(0,1,1)").unwrap().to_string(), "x*y1^2 + s1^2");
        let k = Poly::constant(&c, rat(7));
        assert_eq!(k.initial_form("(0,1,0)").unwrap(), k);
        let z = Poly::zero(&c);
        assert!(z.initial_form("(0,1,1)").unwrap().is_zero());
    }

    #[test]
    fn exact_division() {
        let c = ctx();
        let p = parse_poly("x^2*y - y^3", &c).unwrap();
        let q = parse_poly("x + y", &c).unwrap();
        assert_eq!(p.div_exact(&q).unwrap().to_string(), "x*y - y^2");
        assert!(p.div_exact(&parse_poly("x + z", &c).unwrap()).is_none());
    }

    #[test]
    fn determinant_of_saito_matrix() {
        let c = ctx();
        let m = vec![
            vec![parse_poly("x", &c).unwrap(), parse_poly("y", &c).unwrap()],
            vec![parse_poly("x^2", &c).unwrap(), parse_poly("-y^2", &c).unwrap()],
        ];
        assert_eq!(determinant(&m, &c).to_string(), "-x^2*y - x*y^2");
    }

    #[test]
    fn substitution() {
        let c = ctx();
        let p = parse_poly("x^2 + y", &c).unwrap();
        let q = parse_poly("y + 1", &c).unwrap();
        assert_eq!(p.substitute(0, &q).to_string(), "y^2 + 3*y + 1");
    }
}
