use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::One;

use super::engine::{Basis, Engine, GPoly, Mult};
use super::{find_positive_grading, graded_free_resolution, GradedModulePresentation, Limits};
use crate::error::{Error, Result};
use crate::ring::{Mono, MonomialOrder, Poly, Rat, VarContext};

pub(crate) fn to_gpoly(engine: &Engine, p: &Poly) -> GPoly {
    engine.make(p.terms().iter().map(|(m, c)| (m.clone(), 0, c.clone())))
}

pub(crate) fn from_gpoly(ctx: &Arc<VarContext>, g: &GPoly) -> Poly {
    Poly::from_terms(ctx, g.terms.iter().map(|t| (t.m.clone(), t.c.clone())))
}

struct Cached {
    polys: Vec<Poly>,
    basis: Basis,
}

/// Generators of an ideal of a commutative polynomial ring plus a lazily
/// computed reduced Gröbner basis under `order`.
pub struct IdealHandle {
    ctx: Arc<VarContext>,
    gens: Vec<Poly>,
    order: MonomialOrder,
    limits: Limits,
    cache: OnceLock<Cached>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            ctx: self.ctx.clone(),
            gens: self.gens.clone(),
            order: self.order.clone(),
            limits: self.limits,
            cache: OnceLock::new(),
        }
    }
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", g.join(", "))
    }
}

impl IdealHandle {
    pub fn new(ctx: &Arc<VarContext>, gens: Vec<Poly>, order: MonomialOrder) -> Self {
        let gens = gens.into_iter().filter(|p| !p.is_zero()).collect();
        IdealHandle {
            ctx: ctx.clone(),
            gens,
            order,
            limits: Limits::default(),
            cache: OnceLock::new(),
        }
    }

    /// Grevlex on the full context.
    pub fn grevlex(ctx: &Arc<VarContext>, gens: Vec<Poly>) -> Self {
        Self::new(ctx, gens, MonomialOrder::grevlex(ctx.nvars()))
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self.cache = OnceLock::new();
        self
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        Self::new(&self.ctx, self.gens.clone(), order).with_limits(self.limits)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    fn engine(&self) -> Engine {
        Engine::new(Mult::Commutative, self.order.clone(), self.limits)
    }

    fn cached(&self) -> Result<&Cached> {
        if let Some(c) = self.cache.get() {
            return Ok(c);
        }
        let e = self.engine();
        let input = self.gens.iter().map(|p| (to_gpoly(&e, p), None)).collect();
        let basis = e.groebner(input, false)?;
        let polys = basis.polys.iter().map(|g| from_gpoly(&self.ctx, g)).collect();
        let _ = self.cache.set(Cached { polys, basis });
        Ok(self.cache.get().expect("just set"))
    }

    /// Reduced Gröbner basis (monic, sorted ascending by leading term).
    pub fn groebner_basis(&self) -> Result<&[Poly]> {
        Ok(&self.cached()?.polys)
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        let c = self.cached()?;
        let e = self.engine();
        Ok(from_gpoly(&self.ctx, &e.normal_form(to_gpoly(&e, p), &c.basis)))
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality by two-sided membership.
    pub fn equals(&self, other: &IdealHandle) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self
            .groebner_basis()?
            .iter()
            .any(|g| g.is_constant() && !g.is_zero()))
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Leading monomials of the Gröbner basis.
    pub fn leading_monomials(&self) -> Result<Vec<Mono>> {
        Ok(self
            .cached()?
            .basis
            .polys
            .iter()
            .map(|g| g.lead().m.clone())
            .collect())
    }

    pub fn leading_ideal(&self) -> Result<IdealHandle> {
        let lms = self.leading_monomials()?;
        Ok(IdealHandle::new(
            &self.ctx,
            lms.into_iter()
                .map(|m| Poly::monomial(&self.ctx, m, Rat::one()))
                .collect(),
            self.order.clone(),
        )
        .with_limits(self.limits))
    }

    pub fn sum(&self, other: &IdealHandle) -> IdealHandle {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        IdealHandle::new(&self.ctx, g, self.order.clone()).with_limits(self.limits)
    }

    pub fn add_generators(&self, extra: impl IntoIterator<Item = Poly>) -> IdealHandle {
        let mut g = self.gens.clone();
        g.extend(extra);
        IdealHandle::new(&self.ctx, g, self.order.clone()).with_limits(self.limits)
    }

    /// `I ∩ ℚ[remaining variables]`, returned in the same context under grevlex.
    pub fn eliminate(&self, drop: &[usize]) -> Result<IdealHandle> {
        let n = self.ctx.nvars();
        let weights = find_positive_grading(&self.gens);
        let order = MonomialOrder::elimination(n, drop, weights.as_deref());
        let big = self.with_order(order);
        let kept: Vec<Poly> = big
            .groebner_basis()?
            .iter()
            .filter(|g| !g.involves_any(drop))
            .cloned()
            .collect();
        Ok(IdealHandle::new(&self.ctx, kept, MonomialOrder::grevlex(n)).with_limits(self.limits))
    }

    pub fn eliminate_block(&self, block: &str) -> Result<IdealHandle> {
        let b = self
            .ctx
            .block(block)
            .ok_or_else(|| Error::InvalidInput(format!("no block `{block}`")))?;
        let vars: Vec<usize> = b.vars().collect();
        self.eliminate(&vars)
    }

    /// `I ∩ J` by eliminating `w` from `w I + (1 - w) J`.
    pub fn intersect(&self, other: &IdealHandle) -> Result<IdealHandle> {
        let n = self.ctx.nvars();
        let name = (0..)
            .map(|k| format!("w_{k}"))
            .find(|v| self.ctx.index_of(v).is_none())
            .expect("some name is free");
        let big = self.ctx.extended(crate::ring::BlockKind::Other, "W", &[name])?;
        let lift: Vec<usize> = (0..n).collect();
        let w = Poly::var(&big, n);
        let one_minus_w = &Poly::one(&big) - &w;
        let mut gens: Vec<Poly> = self.gens.iter().map(|f| &w * &f.remap(&big, &lift)).collect();
        gens.extend(other.gens.iter().map(|g| &one_minus_w * &g.remap(&big, &lift)));
        let elim = IdealHandle::grevlex(&big, gens).with_limits(self.limits).eliminate(&[n])?;
        let back: Vec<usize> = (0..=n).map(|i| i.min(n - 1)).collect();
        let kept: Vec<Poly> = elim.gens.iter().map(|g| g.remap(&self.ctx, &back)).collect();
        Ok(IdealHandle::new(&self.ctx, kept, self.order.clone()).with_limits(self.limits))
    }

    /// `(I : g) = { p : p g ∈ I }`, as `(I ∩ (g)) / g`.
    pub fn colon(&self, g: &Poly) -> Result<IdealHandle> {
        if g.is_zero() {
            return Err(Error::InvalidInput("colon by zero".into()));
        }
        let principal = IdealHandle::new(&self.ctx, vec![g.clone()], self.order.clone());
        let meet = self.intersect(&principal)?;
        let gens: Vec<Poly> = meet
            .gens
            .iter()
            .map(|h| h.div_exact(g).expect("elements of (g) are multiples of g"))
            .collect();
        Ok(IdealHandle::new(&self.ctx, gens, self.order.clone()).with_limits(self.limits))
    }

    /// `(I : g^∞)` by iterating colons until stable.
    pub fn saturation(&self, g: &Poly) -> Result<IdealHandle> {
        let mut cur = self.clone();
        loop {
            let next = cur.colon(g)?;
            if cur.contains_ideal(&next)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Krull dimension of `R/I` from the leading-term ideal via maximal
    /// independent variable sets; `-1` for the unit ideal.
    pub fn krull_dimension(&self) -> Result<i64> {
        let lms = self.leading_monomials()?;
        Ok(monomial_dimension(&lms, self.ctx.nvars()))
    }

    /// `n - dim`, the codimension (height) of a proper ideal.
    pub fn codimension(&self) -> Result<i64> {
        Ok(self.ctx.nvars() as i64 - self.krull_dimension()?)
    }

    /// `pdim R/I` from a minimal graded resolution, for ideals homogeneous
    /// under some positive grading.
    pub fn quotient_pdim(&self) -> Result<Option<i64>> {
        let gens: Vec<Poly> = self.gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return Ok(Some(0));
        }
        let Some(w) = find_positive_grading(&gens) else {
            return Ok(None);
        };
        let pres = GradedModulePresentation::ideal(&self.ctx, w, &gens);
        Ok(Some(graded_free_resolution(&pres, self.limits)?.pdim() + 1))
    }

    /// Graded Auslander–Buchsbaum: `R/I` is Cohen–Macaulay iff
    /// `pdim R/I = codim I`. `None` without a positive grading or for the
    /// unit ideal.
    pub fn is_cohen_macaulay(&self) -> Result<Option<bool>> {
        if self.is_unit()? {
            return Ok(None);
        }
        let Some(p) = self.quotient_pdim()? else {
            return Ok(None);
        };
        Ok(Some(p == self.codimension()?))
    }
}

/// Dimension of `k[x]/(monomials)`.
pub(crate) fn monomial_dimension(lms: &[Mono], n: usize) -> i64 {
    if lms.iter().any(|m| m.is_one()) {
        return -1;
    }
    assert!(n < 31, "dimension search supports at most 30 variables");
    let supports: Vec<u32> = lms
        .iter()
        .map(|m| m.support().fold(0u32, |a, i| a | (1 << i)))
        .collect();
    let mut best = 0;
    for u in 0u32..(1u32 << n) {
        let sz = u.count_ones() as i64;
        if sz <= best {
            continue;
        }
        if supports.iter().all(|&s| s & !u != 0) {
            best = sz;
        }
    }
    best
}
