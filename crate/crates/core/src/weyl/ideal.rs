use std::sync::{Arc, OnceLock};

use num_traits::One;

use super::WeylOp;
use crate::error::Result;
use crate::gb::engine::{Basis, Engine, GPoly, Mult, Selection};
use crate::gb::Limits;
use crate::ring::{Mono, MonomialOrder, Poly, Rat, VarContext};

/// Left ideal of `D_n[S]` with a lazily computed reduced left Gröbner basis.
///
/// Any global term order works: `d_i x_i - x_i d_i = 1` has a strictly
/// smaller leading monomial than either product, so leading monomials
/// multiply as in the commutative ring and block orders eliminate.
pub struct WeylIdeal {
    ctx: Arc<VarContext>,
    gens: Vec<WeylOp>,
    order: MonomialOrder,
    limits: Limits,
    selection: Selection,
    track: bool,
    cache: OnceLock<Basis>,
}

impl WeylIdeal {
    pub fn new(ctx: &Arc<VarContext>, gens: Vec<WeylOp>, order: MonomialOrder) -> Self {
        WeylIdeal {
            ctx: ctx.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            order,
            limits: Limits::default(),
            selection: Selection::Normal,
            track: false,
            cache: OnceLock::new(),
        }
    }

    pub fn grevlex(ctx: &Arc<VarContext>, gens: Vec<WeylOp>) -> Self {
        Self::new(ctx, gens, MonomialOrder::grevlex(ctx.nvars()))
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self.cache = OnceLock::new();
        self
    }

    /// Sugar-degree pair selection instead of the normal strategy.
    pub fn with_sugar(mut self, on: bool) -> Self {
        self.selection = if on { Selection::Sugar } else { Selection::Normal };
        self.cache = OnceLock::new();
        self
    }

    /// Record how every basis element is built from the generators.
    pub fn with_tracking(mut self, on: bool) -> Self {
        self.track = on;
        self.cache = OnceLock::new();
        self
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[WeylOp] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    fn engine(&self) -> Engine {
        let mut e = Engine::new(
            Mult::Weyl(self.ctx.weyl_pairs()),
            self.order.clone(),
            self.limits,
        );
        e.selection = self.selection;
        e
    }

    fn to_g(&self, e: &Engine, p: &Poly, comp: u32) -> GPoly {
        e.make(p.terms().iter().map(|(m, c)| (m.clone(), comp, c.clone())))
    }

    fn from_g(&self, g: &GPoly) -> WeylOp {
        WeylOp::from_poly(Poly::from_terms(
            &self.ctx,
            g.terms.iter().map(|t| (t.m.clone(), t.c.clone())),
        ))
    }

    fn basis(&self) -> Result<&Basis> {
        if let Some(b) = self.cache.get() {
            return Ok(b);
        }
        let e = self.engine();
        let one = Mono::one(self.ctx.nvars());
        let input = self
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let sh = self
                    .track
                    .then(|| e.make([(one.clone(), i as u32, Rat::one())]));
                (self.to_g(&e, g.poly(), 0), sh)
            })
            .collect();
        let b = e.groebner(input, self.track)?;
        let _ = self.cache.set(b);
        Ok(self.cache.get().expect("just set"))
    }

    pub fn groebner_basis(&self) -> Result<Vec<WeylOp>> {
        Ok(self.basis()?.polys.iter().map(|g| self.from_g(g)).collect())
    }

    pub fn normal_form(&self, p: &WeylOp) -> Result<WeylOp> {
        let e = self.engine();
        let b = self.basis()?;
        Ok(self.from_g(&e.normal_form(self.to_g(&e, p.poly(), 0), b)))
    }

    pub fn contains(&self, p: &WeylOp) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &WeylIdeal) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &WeylIdeal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// Left cofactors `Q_i` with `p = Σ Q_i g_i`, or `None` when `p` is not a
    /// member. Requires tracking.
    pub fn certificate(&self, p: &WeylOp) -> Result<Option<Vec<WeylOp>>> {
        assert!(self.track, "certificate needs a tracked ideal");
        let e = self.engine();
        let b = self.basis()?;
        let (r, sh) = e.normal_form_tracked(self.to_g(&e, p.poly(), 0), GPoly::default(), b);
        if !r.is_zero() {
            return Ok(None);
        }
        let mut out: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); self.gens.len()];
        for t in sh.terms {
            out[t.comp as usize].push((t.m, -t.c));
        }
        Ok(Some(
            out.into_iter()
                .map(|ts| WeylOp::from_poly(Poly::from_terms(&self.ctx, ts)))
                .collect(),
        ))
    }

    /// Basis elements involving none of `drop`; with an order eliminating
    /// `drop` these generate the intersection with the subalgebra.
    pub fn basis_free_of(&self, drop: &[usize]) -> Result<Vec<WeylOp>> {
        Ok(self
            .groebner_basis()?
            .into_iter()
            .filter(|g| !g.poly().involves_any(drop))
            .collect())
    }

    /// Tracked basis elements free of `drop`, each with its cofactors.
    pub fn basis_free_of_tracked(&self, drop: &[usize]) -> Result<Vec<(WeylOp, Vec<WeylOp>)>> {
        assert!(self.track, "needs a tracked ideal");
        let b = self.basis()?;
        let shadows = b.shadows.as_ref().expect("tracked");
        let mut out = Vec::new();
        for (g, sh) in b.polys.iter().zip(shadows) {
            let op = self.from_g(g);
            if op.poly().involves_any(drop) {
                continue;
            }
            let mut cof: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); self.gens.len()];
            for t in &sh.terms {
                cof[t.comp as usize].push((t.m.clone(), t.c.clone()));
            }
            out.push((
                op,
                cof.into_iter()
                    .map(|ts| WeylOp::from_poly(Poly::from_terms(&self.ctx, ts)))
                    .collect(),
            ));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{parse_weyl, weyl_context};

    #[test]
    fn membership_examples() {
        let c = weyl_context(&["x"], &["s"]).unwrap();
        let w = |s: &str| parse_weyl(s, &c).unwrap();
        let i = WeylIdeal::grevlex(&c, vec![w("x*dx - s"), w("x")]);
        assert!(i.contains(&w("s+1")).unwrap());

        let c2 = weyl_context(&["x", "y"], &[] as &[&str]).unwrap();
        let w2 = |s: &str| parse_weyl(s, &c2).unwrap();
        let j = WeylIdeal::grevlex(&c2, vec![w2("x*dx"), w2("y*dy"), w2("x*y")]);
        assert!(j.contains(&w2("1")).unwrap());
        let k = WeylIdeal::grevlex(&c2, vec![w2("dx")]);
        assert!(!k.contains(&w2("x")).unwrap());
    }

    #[test]
    fn tracked_certificate() {
        let c = weyl_context(&["x"], &["s"]).unwrap();
        let w = |s: &str| parse_weyl(s, &c).unwrap();
        let gens = vec![w("x*dx - s"), w("x")];
        let i = WeylIdeal::grevlex(&c, gens.clone()).with_tracking(true);
        let target = w("s+1");
        let q = i.certificate(&target).unwrap().unwrap();
        let mut sum = WeylOp::zero(&c);
        for (qi, g) in q.iter().zip(&gens) {
            sum = &sum + &(qi * g);
        }
        assert_eq!(sum, target);
    }
}
