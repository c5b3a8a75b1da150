#![allow(dead_code)]

use std::sync::Arc;

use dsalg::linalg::rank;
use dsalg::ring::{Mono, Poly, Rat, VarContext};
use dsalg::weyl::WeylOp;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    let n: i64 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let d: i64 = rng.gen_range(1..=3);
    Rat::new(n.into(), d.into())
}

/// Random monomial of total degree exactly `deg` in `vars`.
pub fn rand_mono(rng: &mut ChaCha8Rng, nvars: usize, vars: &[usize], deg: u32) -> Mono {
    let mut e = vec![0u16; nvars];
    for _ in 0..deg {
        e[vars[rng.gen_range(0..vars.len())]] += 1;
    }
    Mono::from_slice(&e)
}

/// Random polynomial in `vars` with up to `terms` terms of degree at most `max_deg`.
pub fn rand_poly(rng: &mut ChaCha8Rng, ctx: &Arc<VarContext>, vars: &[usize], max_deg: u32, terms: usize) -> Poly {
    let n = ctx.nvars();
    Poly::from_terms(
        ctx,
        (0..terms).map(|_| {
            let d = rng.gen_range(0..=max_deg);
            (rand_mono(rng, n, vars, d), small_rat(rng))
        }),
    )
}

/// Random homogeneous polynomial of degree `deg`.
pub fn rand_homog(rng: &mut ChaCha8Rng, ctx: &Arc<VarContext>, deg: u32, terms: usize) -> Poly {
    let vars: Vec<usize> = (0..ctx.nvars()).collect();
    let n = ctx.nvars();
    Poly::from_terms(ctx, (0..terms).map(|_| (rand_mono(rng, n, &vars, deg), small_rat(rng))))
}

/// Random operator over the whole Weyl context (derivatives and parameters
/// included), in normal-ordered form.
pub fn rand_weyl(rng: &mut ChaCha8Rng, ctx: &Arc<VarContext>, max_deg: u32, terms: usize) -> WeylOp {
    let vars: Vec<usize> = (0..ctx.nvars()).collect();
    WeylOp::from_poly(rand_poly(rng, ctx, &vars, max_deg, terms))
}

pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Mono> {
    fn go(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if i + 1 == cur.len() {
            cur[i] = left as u16;
            out.push(Mono::from_slice(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            go(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    go(0, deg, &mut vec![0; nvars], &mut out);
    out
}

/// Membership of a homogeneous `p` in the ideal of homogeneous `gens`, by
/// comparing ranks of the degree-`deg p` Macaulay matrix with and without `p`.
pub fn macaulay_member(gens: &[Poly], p: &Poly) -> bool {
    if p.is_zero() {
        return true;
    }
    let ctx = p.ctx();
    let n = ctx.nvars();
    let d = p.total_degree() as u32;
    let basis = monomials_of_degree(n, d);
    let row = |q: &Poly| -> Vec<Rat> { basis.iter().map(|m| q.coeff(m)).collect() };
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let gd = g.total_degree() as u32;
        if gd > d {
            continue;
        }
        for m in monomials_of_degree(n, d - gd) {
            rows.push(row(&g.mul_mono(&m, &Rat::from_integer(1.into()))));
        }
    }
    let r0 = rank(&rows);
    rows.push(row(p));
    rank(&rows) == r0
}
