//! Buchberger engine shared by the commutative and the Weyl-algebra code.
//!
//! Elements live in a free module of finite rank over either a commutative
//! polynomial ring or a Weyl algebra `D_n[S]` (normal order, `x` left of `d`).
//! Ideals are the rank-one case. Left ideals only: every multiplication is a
//! monomial acting from the left.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::Limits;
use crate::error::{Error, Result};
use crate::ring::{Mono, MonomialOrder, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Mult {
    Commutative,
    /// `(x index, d index)` pairs with `d x = x d + 1`; all other variables central.
    Weyl(Vec<(usize, usize)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Selection {
    /// Smallest lcm first.
    Normal,
    /// Smallest sugar degree first, ties by lcm.
    Sugar,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Term {
    pub m: Mono,
    pub comp: u32,
    pub c: Rat,
}

/// Sorted (descending) list of module terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct GPoly {
    pub terms: Vec<Term>,
}

impl GPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }

    fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.m.degree()).max().unwrap_or(0)
    }

    fn scale(&mut self, c: &Rat) {
        for t in &mut self.terms {
            t.c *= c;
        }
    }
}

#[inline]
fn mask(m: &Mono) -> u64 {
    let mut k = 0u64;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            k |= 1 << (i % 64);
        }
    }
    k
}

#[derive(Clone, Debug)]
pub(crate) struct Engine {
    pub mult: Mult,
    pub order: MonomialOrder,
    /// Position-over-term (lower component index is larger) when true,
    /// term-over-position otherwise.
    pub pot: bool,
    pub limits: Limits,
    pub selection: Selection,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    comp: u32,
    sugar: u32,
}

pub(crate) struct Basis {
    pub polys: Vec<GPoly>,
    pub shadows: Option<Vec<GPoly>>,
}

struct Work {
    polys: Vec<GPoly>,
    shadows: Option<Vec<GPoly>>,
    lead_mask: Vec<u64>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Engine {
    pub fn new(mult: Mult, order: MonomialOrder, limits: Limits) -> Self {
        Engine {
            mult,
            order,
            pot: true,
            limits,
            selection: Selection::Normal,
        }
    }

    pub fn is_commutative(&self) -> bool {
        self.mult == Mult::Commutative
    }

    #[inline]
    pub fn cmp_terms(&self, am: &Mono, ac: u32, bm: &Mono, bc: u32) -> Ordering {
        if self.pot {
            match bc.cmp(&ac) {
                Ordering::Equal => self.order.cmp(am, bm),
                o => o,
            }
        } else {
            match self.order.cmp(am, bm) {
                Ordering::Equal => bc.cmp(&ac),
                o => o,
            }
        }
    }

    /// Builds a sorted element from arbitrary terms (like terms summed).
    pub fn make(&self, terms: impl IntoIterator<Item = (Mono, u32, Rat)>) -> GPoly {
        let mut acc: HashMap<(Mono, u32), Rat> = HashMap::new();
        for (m, comp, c) in terms {
            if c.is_zero() {
                continue;
            }
            *acc.entry((m, comp)).or_insert_with(Rat::zero) += c;
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((m, comp), c)| Term { m, comp, c })
            .collect();
        terms.sort_by(|a, b| self.cmp_terms(&b.m, b.comp, &a.m, a.comp));
        GPoly { terms }
    }

    /// `c * m * g` (left multiplication).
    pub fn mul_mono(&self, m: &Mono, c: &Rat, g: &GPoly) -> GPoly {
        match &self.mult {
            Mult::Commutative => GPoly {
                terms: g
                    .terms
                    .iter()
                    .map(|t| Term {
                        m: m.mul(&t.m),
                        comp: t.comp,
                        c: c * &t.c,
                    })
                    .collect(),
            },
            Mult::Weyl(pairs) => {
                if !pairs.iter().any(|&(_, d)| m.get(d) > 0) {
                    // no derivative on the left: plain shift, order preserved
                    return GPoly {
                        terms: g
                            .terms
                            .iter()
                            .map(|t| Term {
                                m: m.mul(&t.m),
                                comp: t.comp,
                                c: c * &t.c,
                            })
                            .collect(),
                    };
                }
                let mut out = Vec::with_capacity(g.terms.len() * 2);
                for t in &g.terms {
                    for (p, k) in weyl_mono_mul(pairs, m, &t.m) {
                        out.push((p, t.comp, c * &t.c * Rat::from_integer(k)));
                    }
                }
                self.make(out)
            }
        }
    }

    pub fn add(&self, a: &GPoly, b: &GPoly) -> GPoly {
        self.lin_comb(a, &Rat::one(), b)
    }

    /// `a + k * b` by merging.
    pub fn lin_comb(&self, a: &GPoly, k: &Rat, b: &GPoly) -> GPoly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (x, y) = (&a.terms[i], &b.terms[j]);
            match self.cmp_terms(&x.m, x.comp, &y.m, y.comp) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        m: y.m.clone(),
                        comp: y.comp,
                        c: k * &y.c,
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &x.c + k * &y.c;
                    if !c.is_zero() {
                        out.push(Term {
                            m: x.m.clone(),
                            comp: x.comp,
                            c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        out.extend(b.terms[j..].iter().map(|y| Term {
            m: y.m.clone(),
            comp: y.comp,
            c: k * &y.c,
        }));
        GPoly { terms: out }
    }

    fn find_reducer(&self, t: &Term, polys: &[GPoly], masks: &[u64], usable: &[bool]) -> Option<usize> {
        let tm = mask(&t.m);
        (0..polys.len()).find(|&i| {
            usable[i]
                && masks[i] & !tm == 0
                && polys[i].lead().comp == t.comp
                && polys[i].lead().m.divides(&t.m)
        })
    }

    /// Full normal form of `p` against monic `polys`; optionally carries a
    /// shadow (cofactor) alongside: `shadow -= k*m*shadows[i]` for every step.
    fn reduce_with(
        &self,
        mut p: GPoly,
        mut shadow: Option<GPoly>,
        polys: &[GPoly],
        shadows: Option<&[GPoly]>,
        masks: &[u64],
        usable: &[bool],
        tail: bool,
        sugar: Option<(&mut u32, &[u32])>,
    ) -> (GPoly, Option<GPoly>) {
        let mut sugar = sugar;
        let mut idx = 0;
        while idx < p.terms.len() {
            let t = &p.terms[idx];
            match self.find_reducer(t, polys, masks, usable) {
                Some(i) => {
                    let q = polys[i].lead().m.quotient_of(&t.m);
                    let k = -t.c.clone();
                    let prod = self.mul_mono(&q, &Rat::one(), &polys[i]);
                    if let Some((s, sug)) = sugar.as_mut() {
                        **s = (**s).max(sug[i] + q.degree());
                    }
                    // terms above idx are untouched since every term of prod is <= t
                    let tailpart = GPoly {
                        terms: p.terms.split_off(idx),
                    };
                    let reduced = self.lin_comb(&tailpart, &k, &prod);
                    p.terms.extend(reduced.terms);
                    if let (Some(sh), Some(shs)) = (shadow.as_mut(), shadows) {
                        let sp = self.mul_mono(&q, &Rat::one(), &shs[i]);
                        *sh = self.lin_comb(sh, &k, &sp);
                    }
                }
                None => {
                    if !tail {
                        break;
                    }
                    idx += 1;
                }
            }
        }
        (p, shadow)
    }

    /// Normal form against a finished basis.
    pub fn normal_form(&self, p: GPoly, basis: &Basis) -> GPoly {
        let masks: Vec<u64> = basis.polys.iter().map(|g| mask(&g.lead().m)).collect();
        let usable = vec![true; basis.polys.len()];
        self.reduce_with(p, None, &basis.polys, None, &masks, &usable, true, None)
            .0
    }

    /// Normal form with cofactor tracking through the basis shadows.
    pub fn normal_form_tracked(&self, p: GPoly, shadow: GPoly, basis: &Basis) -> (GPoly, GPoly) {
        let masks: Vec<u64> = basis.polys.iter().map(|g| mask(&g.lead().m)).collect();
        let usable = vec![true; basis.polys.len()];
        let (r, s) = self.reduce_with(
            p,
            Some(shadow),
            &basis.polys,
            basis.shadows.as_deref(),
            &masks,
            &usable,
            true,
            None,
        );
        (r, s.expect("shadow carried"))
    }

    fn sugar_of(&self, p: &GPoly) -> u32 {
        p.max_degree()
    }

    fn check_limits(&self, p: &GPoly, basis_len: usize) -> Result<()> {
        let d = p.max_degree();
        if d > self.limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "degree {d} exceeds the limit {}",
                self.limits.max_degree
            )));
        }
        if basis_len > self.limits.max_basis {
            return Err(Error::ResourceLimit(format!(
                "basis size exceeds the limit {}",
                self.limits.max_basis
            )));
        }
        Ok(())
    }

    /// Reduced Gröbner basis of the submodule generated by `input`.
    /// With `track`, each input carries a shadow that is transformed alongside.
    pub fn groebner(&self, input: Vec<(GPoly, Option<GPoly>)>, track: bool) -> Result<Basis> {
        let mut w = Work {
            polys: Vec::new(),
            shadows: if track { Some(Vec::new()) } else { None },
            lead_mask: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
        };
        let mut input = input;
        // small leading terms first keeps the early reductions cheap
        input.sort_by(|a, b| match (a.0.terms.first(), b.0.terms.first()) {
            (Some(x), Some(y)) => self.cmp_terms(&x.m, x.comp, &y.m, y.comp),
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
        });
        for (p, sh) in input {
            let sh = if track {
                Some(sh.unwrap_or_default())
            } else {
                None
            };
            let mut sug = self.sugar_of(&p);
            let (r, rs) = self.reduce_with(
                p,
                sh,
                &w.polys,
                w.shadows.as_deref(),
                &w.lead_mask,
                &w.active,
                true,
                Some((&mut sug, &w.sugar)),
            );
            if !r.is_zero() {
                self.insert(&mut w, r, rs, sug)?;
            }
        }
        while let Some(pair) = self.select(&mut w) {
            let (gi, gj) = (&w.polys[pair.i], &w.polys[pair.j]);
            let qi = gi.lead().m.quotient_of(&pair.lcm);
            let qj = gj.lead().m.quotient_of(&pair.lcm);
            let a = self.mul_mono(&qi, &Rat::one(), gi);
            let b = self.mul_mono(&qj, &Rat::one(), gj);
            let sp = self.lin_comb(&a, &-Rat::one(), &b);
            let sh = w.shadows.as_ref().map(|s| {
                let sa = self.mul_mono(&qi, &Rat::one(), &s[pair.i]);
                let sb = self.mul_mono(&qj, &Rat::one(), &s[pair.j]);
                self.lin_comb(&sa, &-Rat::one(), &sb)
            });
            let mut sug = pair.sugar;
            let usable = vec![true; w.polys.len()];
            let (r, rs) = self.reduce_with(
                sp,
                sh,
                &w.polys,
                w.shadows.as_deref(),
                &w.lead_mask,
                &usable,
                true,
                Some((&mut sug, &w.sugar)),
            );
            if !r.is_zero() {
                self.insert(&mut w, r, rs, sug)?;
            }
        }
        Ok(self.finish(w))
    }

    fn select(&self, w: &mut Work) -> Option<Pair> {
        if w.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..w.pairs.len() {
            let (a, b) = (&w.pairs[k], &w.pairs[best]);
            let o = match self.selection {
                Selection::Sugar => a.sugar.cmp(&b.sugar).then_with(|| {
                    self.cmp_terms(&a.lcm, a.comp, &b.lcm, b.comp)
                }),
                Selection::Normal => self.cmp_terms(&a.lcm, a.comp, &b.lcm, b.comp),
            };
            if o == Ordering::Less {
                best = k;
            }
        }
        Some(w.pairs.swap_remove(best))
    }

    /// Adds a new (nonzero, reduced) element and updates the pair set with the
    /// Gebauer–Möller criteria. The coprime-leading-term criterion is only
    /// applied in the commutative rank-one setting.
    fn insert(&self, w: &mut Work, mut h: GPoly, hs: Option<GPoly>, sugar: u32) -> Result<()> {
        self.check_limits(&h, w.polys.len() + 1)?;
        let inv = h.lead().c.recip();
        h.scale(&inv);
        let hs = hs.map(|mut s| {
            s.scale(&inv);
            s
        });
        let t = w.polys.len();
        let (hm, hc) = (h.lead().m.clone(), h.lead().comp);
        // only valid for elements supported on a single component
        let single = |g: &GPoly| g.terms.iter().all(|t| t.comp == g.lead().comp);
        let product_ok = self.is_commutative() && single(&h);

        let mut cands: Vec<(usize, Mono, bool)> = Vec::new();
        for i in 0..t {
            if !w.active[i] || w.polys[i].lead().comp != hc {
                continue;
            }
            let gm = &w.polys[i].lead().m;
            cands.push((i, gm.lcm(&hm), product_ok && single(&w.polys[i]) && gm.coprime(&hm)));
        }
        // criterion M / F
        let mut kept: Vec<(usize, Mono, bool)> = Vec::new();
        let mut rest = cands;
        while let Some((i, l, coprime)) = rest.pop() {
            let dominated = !coprime
                && (rest.iter().any(|(_, l2, _)| l2.divides(&l))
                    || kept.iter().any(|(_, l2, _)| l2.divides(&l)));
            if !dominated {
                kept.push((i, l, coprime));
            }
        }
        // criterion B on old pairs
        w.pairs.retain(|p| {
            if p.comp != hc || !hm.divides(&p.lcm) {
                return true;
            }
            let li = w.polys[p.i].lead().m.lcm(&hm);
            let lj = w.polys[p.j].lead().m.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        for (i, l, coprime) in kept {
            if coprime {
                continue;
            }
            let gm = &w.polys[i].lead().m;
            let s = (w.sugar[i] + gm.quotient_of(&l).degree()).max(sugar + hm.quotient_of(&l).degree());
            w.pairs.push(Pair {
                i,
                j: t,
                lcm: l,
                comp: hc,
                sugar: s,
            });
        }
        for i in 0..t {
            if w.active[i] && w.polys[i].lead().comp == hc && hm.divides(&w.polys[i].lead().m) {
                w.active[i] = false;
            }
        }
        w.lead_mask.push(mask(&hm));
        w.polys.push(h);
        if let Some(s) = w.shadows.as_mut() {
            s.push(hs.unwrap_or_default());
        }
        w.sugar.push(sugar);
        w.active.push(true);
        Ok(())
    }

    /// Minimal, inter-reduced, monic, sorted ascending by leading term.
    fn finish(&self, w: Work) -> Basis {
        let Work {
            polys, shadows, ..
        } = w;
        let n = polys.len();
        let mut keep: Vec<usize> = Vec::new();
        for i in 0..n {
            let (mi, ci) = (&polys[i].lead().m, polys[i].lead().comp);
            let redundant = (0..n).any(|j| {
                j != i
                    && polys[j].lead().comp == ci
                    && polys[j].lead().m.divides(mi)
                    && (polys[j].lead().m != *mi || j < i)
            });
            if !redundant {
                keep.push(i);
            }
        }
        keep.sort_by(|&a, &b| {
            let (x, y) = (polys[a].lead(), polys[b].lead());
            self.cmp_terms(&x.m, x.comp, &y.m, y.comp)
        });
        let mut out: Vec<GPoly> = keep.iter().map(|&i| polys[i].clone()).collect();
        let mut out_sh: Option<Vec<GPoly>> = shadows
            .as_ref()
            .map(|s| keep.iter().map(|&i| s[i].clone()).collect());
        let masks: Vec<u64> = out.iter().map(|g| mask(&g.lead().m)).collect();
        for k in 0..out.len() {
            let lead = out[k].terms[0].clone();
            let tail = GPoly {
                terms: out[k].terms[1..].to_vec(),
            };
            let mut usable = vec![true; out.len()];
            usable[k] = false;
            let sh = out_sh.as_ref().map(|s| s[k].clone());
            let (r, rs) = self.reduce_with(
                tail,
                sh,
                &out,
                out_sh.as_deref(),
                &masks,
                &usable,
                true,
                None,
            );
            let mut terms = vec![lead];
            terms.extend(r.terms);
            out[k] = GPoly { terms };
            if let (Some(s), Some(rs)) = (out_sh.as_mut(), rs) {
                s[k] = rs;
            }
        }
        Basis {
            polys: out,
            shadows: out_sh,
        }
    }
}

/// `m * t` in the Weyl algebra for normal-ordered monomials.
pub(crate) fn weyl_mono_mul(pairs: &[(usize, usize)], m: &Mono, t: &Mono) -> SmallVec<[(Mono, BigInt); 4]> {
    let base = m.mul(t);
    // per active pair: max number of contractions
    let active: SmallVec<[(usize, usize, u16, u16); 4]> = pairs
        .iter()
        .filter(|&&(x, d)| m.get(d) > 0 && t.get(x) > 0)
        .map(|&(x, d)| (x, d, m.get(d), t.get(x)))
        .collect();
    let mut out: SmallVec<[(Mono, BigInt); 4]> = SmallVec::new();
    if active.is_empty() {
        out.push((base, BigInt::one()));
        return out;
    }
    // coefficient of contracting k times: k! C(b,k) C(c,k)
    let coef = |b: u16, c: u16, k: u16| -> BigInt {
        let mut r = BigInt::one();
        for i in 0..k {
            r *= BigInt::from((b - i) as u64) * BigInt::from((c - i) as u64);
            r /= BigInt::from((i + 1) as u64);
        }
        r
    };
    let mut ks: SmallVec<[u16; 4]> = SmallVec::from_elem(0, active.len());
    loop {
        let mut mono = base.clone();
        let mut c = BigInt::one();
        for (idx, &(x, d, b, cc)) in active.iter().enumerate() {
            let k = ks[idx];
            if k > 0 {
                mono.set(x, mono.get(x) - k);
                mono.set(d, mono.get(d) - k);
                c *= coef(b, cc, k);
            }
        }
        out.push((mono, c));
        // odometer
        let mut pos = 0;
        loop {
            if pos == active.len() {
                return out;
            }
            let lim = active[pos].2.min(active[pos].3);
            if ks[pos] < lim {
                ks[pos] += 1;
                break;
            }
            ks[pos] = 0;
            pos += 1;
        }
    }
}
