use std::sync::{Arc, OnceLock};

use num_traits::One;
use serde::Serialize;

use super::engine::{Basis, Engine, GPoly, Mult};
use super::Limits;
use crate::error::{Error, Result};
use crate::ring::{MonomialOrder, Poly, Rat, VarContext};

fn vec_to_gpoly(engine: &Engine, v: &[Poly], offset: u32) -> GPoly {
    engine.make(v.iter().enumerate().flat_map(|(i, p)| {
        p.terms()
            .iter()
            .map(move |(m, c)| (m.clone(), i as u32 + offset, c.clone()))
    }))
}

fn gpoly_to_vec(ctx: &Arc<VarContext>, g: &GPoly, lo: u32, rank: usize) -> Vec<Poly> {
    let mut buckets: Vec<Vec<_>> = vec![Vec::new(); rank];
    for t in &g.terms {
        if t.comp >= lo && ((t.comp - lo) as usize) < rank {
            buckets[(t.comp - lo) as usize].push((t.m.clone(), t.c.clone()));
        }
    }
    buckets
        .into_iter()
        .map(|b| Poly::from_terms(ctx, b))
        .collect()
}

fn module_engine(ctx: &Arc<VarContext>, limits: Limits) -> Engine {
    Engine::new(
        Mult::Commutative,
        MonomialOrder::grevlex(ctx.nvars()),
        limits,
    )
}

/// Generators of the syzygy module of the vectors `v` (all of equal rank).
pub fn syzygies(ctx: &Arc<VarContext>, v: &[Vec<Poly>], limits: Limits) -> Result<Vec<Vec<Poly>>> {
    let k = v.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let m = v[0].len();
    let e = module_engine(ctx, limits);
    let input: Vec<(GPoly, Option<GPoly>)> = v
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut g = vec_to_gpoly(&e, row, 0);
            let unit = e.make([(crate::ring::Mono::one(ctx.nvars()), (m + i) as u32, Rat::one())]);
            g = e.add(&g, &unit);
            (g, None)
        })
        .collect();
    let basis = e.groebner(input, false)?;
    Ok(basis
        .polys
        .iter()
        .filter(|g| g.lead().comp as usize >= m)
        .map(|g| gpoly_to_vec(ctx, g, m as u32, k))
        .collect())
}

/// Submodule of a free module `R^rank` with a cached Gröbner basis.
pub struct Submodule {
    ctx: Arc<VarContext>,
    rank: usize,
    gens: Vec<Vec<Poly>>,
    limits: Limits,
    cache: OnceLock<Basis>,
}

impl Submodule {
    pub fn new(ctx: &Arc<VarContext>, rank: usize, gens: Vec<Vec<Poly>>, limits: Limits) -> Self {
        let gens = gens
            .into_iter()
            .filter(|g| g.iter().any(|p| !p.is_zero()))
            .collect();
        Submodule {
            ctx: ctx.clone(),
            rank,
            gens,
            limits,
            cache: OnceLock::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<Poly>] {
        &self.gens
    }

    fn basis(&self) -> Result<&Basis> {
        if let Some(b) = self.cache.get() {
            return Ok(b);
        }
        let e = module_engine(&self.ctx, self.limits);
        let input = self.gens.iter().map(|g| (vec_to_gpoly(&e, g, 0), None)).collect();
        let b = e.groebner(input, false)?;
        let _ = self.cache.set(b);
        Ok(self.cache.get().expect("just set"))
    }

    pub fn groebner_basis(&self) -> Result<Vec<Vec<Poly>>> {
        Ok(self
            .basis()?
            .polys
            .iter()
            .map(|g| gpoly_to_vec(&self.ctx, g, 0, self.rank))
            .collect())
    }

    pub fn normal_form(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        let e = module_engine(&self.ctx, self.limits);
        let r = e.normal_form(vec_to_gpoly(&e, v, 0), self.basis()?);
        Ok(gpoly_to_vec(&self.ctx, &r, 0, self.rank))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        if v.iter().all(|p| p.is_zero()) {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        Ok(self.normal_form(v)?.iter().all(|p| p.is_zero()))
    }

    pub fn contains_module(&self, other: &Submodule) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Submodule) -> Result<bool> {
        Ok(self.contains_module(other)? && other.contains_module(self)?)
    }
}

/// Homogeneous generators of a submodule of a graded free module
/// `⊕ R(-col_degrees[i])`, graded by positive variable `weights`.
#[derive(Clone, Debug)]
pub struct GradedModulePresentation {
    pub ctx: Arc<VarContext>,
    pub weights: Vec<u32>,
    pub col_degrees: Vec<i64>,
    pub generators: Vec<Vec<Poly>>,
}

impl GradedModulePresentation {
    /// An ideal viewed as a submodule of `R`.
    pub fn ideal(ctx: &Arc<VarContext>, weights: Vec<u32>, gens: &[Poly]) -> Self {
        GradedModulePresentation {
            ctx: ctx.clone(),
            weights,
            col_degrees: vec![0],
            generators: gens.iter().map(|g| vec![g.clone()]).collect(),
        }
    }

    /// Degree of a homogeneous vector, `None` for zero.
    pub fn degree_of(&self, v: &[Poly]) -> Result<Option<i64>> {
        vector_degree(v, &self.weights, &self.col_degrees)
    }
}

fn vector_degree(v: &[Poly], w: &[u32], cols: &[i64]) -> Result<Option<i64>> {
    let mut deg: Option<i64> = None;
    for (p, &c) in v.iter().zip(cols) {
        for (m, _) in p.terms() {
            let d = m.weighted_degree(w) as i64 + c;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::NonHomogeneousInput),
                _ => {}
            }
        }
    }
    Ok(deg)
}

/// Minimal homogeneous generating subset (graded Nakayama, scanned in
/// increasing degree).
pub fn minimal_generators(pres: &GradedModulePresentation, limits: Limits) -> Result<Vec<(Vec<Poly>, i64)>> {
    let mut items: Vec<(Vec<Poly>, i64)> = Vec::new();
    for g in &pres.generators {
        if let Some(d) = pres.degree_of(g)? {
            items.push((g.clone(), d));
        }
    }
    items.sort_by_key(|(_, d)| *d);
    let rank = pres.col_degrees.len();
    let mut kept: Vec<(Vec<Poly>, i64)> = Vec::new();
    for (g, d) in items {
        let sub = Submodule::new(
            &pres.ctx,
            rank,
            kept.iter().map(|(v, _)| v.clone()).collect(),
            limits,
        );
        if !sub.contains(&g)? {
            kept.push((g, d));
        }
    }
    Ok(kept)
}

/// Ranks and degrees of a minimal graded free resolution of a submodule.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    /// `betti[i]` is the rank of the i-th free module.
    pub betti: Vec<usize>,
    /// Generator degrees of each free module.
    pub degrees: Vec<Vec<i64>>,
}

impl Resolution {
    /// Projective dimension of the resolved module (`-1` for zero).
    pub fn pdim(&self) -> i64 {
        self.betti.len() as i64 - 1
    }
}

/// Minimal graded free resolution of the submodule given by `pres`.
pub fn graded_free_resolution(pres: &GradedModulePresentation, limits: Limits) -> Result<Resolution> {
    if pres.weights.iter().any(|&w| w == 0) {
        return Err(Error::InvalidInput("grading weights must be positive".into()));
    }
    let mut betti = Vec::new();
    let mut degrees = Vec::new();
    let mut cur = pres.clone();
    for _ in 0..=pres.ctx.nvars() + 1 {
        let mins = minimal_generators(&cur, limits)?;
        if mins.is_empty() {
            break;
        }
        betti.push(mins.len());
        let degs: Vec<i64> = mins.iter().map(|(_, d)| *d).collect();
        degrees.push(degs.clone());
        let vecs: Vec<Vec<Poly>> = mins.into_iter().map(|(v, _)| v).collect();
        let syz = syzygies(&pres.ctx, &vecs, limits)?;
        cur = GradedModulePresentation {
            ctx: pres.ctx.clone(),
            weights: pres.weights.clone(),
            col_degrees: degs,
            generators: syz,
        };
    }
    Ok(Resolution { betti, degrees })
}
