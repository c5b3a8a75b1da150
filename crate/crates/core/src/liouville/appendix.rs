//! Randomized checks of the homogenization machinery over a polynomial
//! coefficient ring `R = ℚ[r_1, …]`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{homogenize_u, initial_ideal};
use crate::error::Result;
use crate::gb::{IdealHandle, Limits};
use crate::par::Exec;
use crate::ring::{BlockKind, Mono, MonomialOrder, OrderKind, Poly, Rat, VarContext};

/// An ideal of `R[X]` contained in `(X)` and a nonnegative weight on `X`.
#[derive(Clone, Debug)]
pub struct AppendixCase {
    pub ideal: IdealHandle,
    /// Weights on every variable; zero on the coefficient variables.
    pub u: Vec<u32>,
    pub x_vars: Vec<usize>,
    pub r_vars: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AppendixOutcome {
    /// `(HOM_u(I) : t) = HOM_u(I)`.
    pub t_regular: bool,
    /// `t ↦ 0` gives `In_u(I)`.
    pub special_fiber: bool,
    /// `t ↦ 1` gives `I`.
    pub generic_fiber: bool,
    /// `dim R[X]/In_u(I) ≥ dim R[X]/I`.
    pub dimension: bool,
    /// `In_{τu}(I) R[t] = In_{τu'}(HOM_u(I))`.
    pub initial_lemma: bool,
}

impl AppendixOutcome {
    pub fn all(&self) -> bool {
        self.t_regular && self.special_fiber && self.generic_fiber && self.dimension && self.initial_lemma
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub seed: u64,
    pub cases: Vec<(String, AppendixOutcome)>,
}

impl AppendixReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|(_, o)| o.all())
    }

    pub fn count(&self, pick: impl Fn(&AppendixOutcome) -> bool) -> usize {
        self.cases.iter().filter(|(_, o)| pick(o)).count()
    }
}

fn random_poly(rng: &mut ChaCha8Rng, ctx: &Arc<VarContext>, x: &[usize], r: &[usize]) -> Poly {
    let n = ctx.nvars();
    let nterms = rng.gen_range(1..=3);
    let mut terms = Vec::new();
    for _ in 0..nterms {
        let deg = rng.gen_range(1..=3u16);
        let mut e = vec![0u16; n];
        // at least one X factor keeps I inside (X)
        e[x[rng.gen_range(0..x.len())]] += 1;
        for _ in 1..deg {
            let v = if rng.gen_bool(0.6) {
                x[rng.gen_range(0..x.len())]
            } else {
                r[rng.gen_range(0..r.len())]
            };
            e[v] += 1;
        }
        let c = loop {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        terms.push((Mono::from_slice(&e), Rat::from_integer(c.into())));
    }
    Poly::from_terms(ctx, terms)
}

/// Up to three generators of degree at most three in two `X` variables
/// over one or two coefficient variables.
pub fn random_case(rng: &mut ChaCha8Rng) -> Result<AppendixCase> {
    let nr = rng.gen_range(1..=2);
    let rs: Vec<String> = (1..=nr).map(|k| format!("r{k}")).collect();
    let ctx = VarContext::new(&[
        (BlockKind::X, "X", vec!["x1".to_string(), "x2".to_string()]),
        (BlockKind::Other, "R", rs),
    ])?;
    let x_vars = vec![0, 1];
    let r_vars: Vec<usize> = (2..2 + nr).collect();
    let ngens = rng.gen_range(1..=3);
    let gens: Vec<Poly> = (0..ngens)
        .map(|_| random_poly(rng, &ctx, &x_vars, &r_vars))
        .filter(|p| !p.is_zero())
        .collect();
    let mut u = vec![0u32; ctx.nvars()];
    for &i in &x_vars {
        u[i] = rng.gen_range(0..=2);
    }
    Ok(AppendixCase {
        ideal: IdealHandle::grevlex(&ctx, gens),
        u,
        x_vars,
        r_vars,
    })
}

/// Terms of `p` sharing the `keep`-part of the leading monomial under `order`.
fn initial_by_part(p: &Poly, order: &MonomialOrder, keep: &[usize]) -> Poly {
    let Some((lead, _)) = p.leading_term(order) else {
        return p.clone();
    };
    let part = |m: &Mono| keep.iter().map(|&i| m.get(i)).collect::<Vec<_>>();
    let target = part(lead);
    Poly::from_terms(
        p.ctx(),
        p.terms()
            .iter()
            .filter(|(m, _)| part(m) == target)
            .cloned(),
    )
}

pub fn check_case(case: &AppendixCase, limits: Limits) -> Result<AppendixOutcome> {
    let i = case.ideal.clone().with_limits(limits);
    let ctx = i.ctx().clone();
    let n = ctx.nvars();
    let u = &case.u;
    let h = homogenize_u(&i, u)?;
    let tctx = h.ctx().clone();
    let t = n;
    let tp = Poly::var(&tctx, t);

    let t_regular = h.contains_ideal(&h.colon(&tp)?)?;

    let down: Vec<usize> = (0..=n).map(|j| j.min(n - 1)).collect();
    let at = |v: i64| -> Vec<Poly> {
        h.generators()
            .iter()
            .map(|g| g.eval_var(t, &Rat::from_integer(v.into())).remap(&ctx, &down))
            .collect()
    };
    let inu = initial_ideal(&i, u)?;
    // an independent refinement of u for the comparison
    let inu_lex = {
        let ord = MonomialOrder::new(
            OrderKind::Weighted {
                weights: u.clone(),
                tie: Box::new(OrderKind::Lex),
            },
            n,
        )?;
        let gb = i.with_order(ord).groebner_basis()?.to_vec();
        IdealHandle::grevlex(&ctx, gb.iter().map(|g| g.initial_form_weights(u)).collect())
    };
    let special = IdealHandle::grevlex(&ctx, at(0)).with_limits(limits);
    let generic = IdealHandle::grevlex(&ctx, at(1)).with_limits(limits);
    let special_fiber = special.equals(&inu)? && inu.equals(&inu_lex)?;
    let generic_fiber = generic.equals(&i)?;
    let dimension = inu.krull_dimension()? >= i.krull_dimension()?;

    // τ = grevlex on X; coefficient variables refine last
    let xr = OrderKind::Block {
        blocks: vec![
            (case.x_vars.clone(), OrderKind::Grevlex),
            (case.r_vars.clone(), OrderKind::Grevlex),
        ],
    };
    let tau_u = MonomialOrder::new(
        OrderKind::Weighted {
            weights: u.clone(),
            tie: Box::new(xr.clone()),
        },
        n,
    )?;
    let lhs_gens: Vec<Poly> = i
        .with_order(tau_u.clone())
        .groebner_basis()?
        .iter()
        .map(|g| initial_by_part(g, &tau_u, &case.x_vars).remap(&tctx, &(0..n).collect::<Vec<_>>()))
        .collect();
    // τu': u' = (u, 1), then smaller t-degree (equivalently larger u), then τ
    let mut u_prime = u.clone();
    u_prime.push(1);
    let mut u_zero_t = u.clone();
    u_zero_t.push(0);
    let tau_u_prime = MonomialOrder::new(
        OrderKind::Weighted {
            weights: u_prime,
            tie: Box::new(OrderKind::Weighted {
                weights: u_zero_t,
                tie: Box::new(xr),
            }),
        },
        n + 1,
    )?;
    let mut xt = case.x_vars.clone();
    xt.push(t);
    let rhs_gens: Vec<Poly> = h
        .with_order(tau_u_prime.clone())
        .groebner_basis()?
        .iter()
        .map(|g| initial_by_part(g, &tau_u_prime, &xt))
        .collect();
    let lhs = IdealHandle::grevlex(&tctx, lhs_gens).with_limits(limits);
    let rhs = IdealHandle::grevlex(&tctx, rhs_gens).with_limits(limits);
    let initial_lemma = lhs.equals(&rhs)?;

    Ok(AppendixOutcome {
        t_regular,
        special_fiber,
        generic_fiber,
        dimension,
        initial_lemma,
    })
}

/// `count` random cases from `seed`, checked under `exec`.
pub fn appendix_suite(seed: u64, count: usize, exec: Exec, limits: Limits) -> Result<AppendixReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(count);
    while cases.len() < count {
        let c = random_case(&mut rng)?;
        if !c.ideal.generators().is_empty() {
            cases.push(c);
        }
    }
    let outcomes = exec.try_map(&cases, |c| check_case(c, limits))?;
    let labelled = cases
        .iter()
        .zip(outcomes)
        .map(|(c, o)| {
            let gens: Vec<String> = c.ideal.generators().iter().map(|g| g.to_string()).collect();
            (format!("I = ({}), u = {:?}", gens.join(", "), &c.u[..c.x_vars.len()]), o)
        })
        .collect();
    Ok(AppendixReport {
        seed,
        cases: labelled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_suite() {
        let r = appendix_suite(7, 24, Exec::default(), Limits::default()).unwrap();
        for (name, o) in &r.cases {
            assert!(o.all(), "{name}: {o:?}");
        }
    }
}
