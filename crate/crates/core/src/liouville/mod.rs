//! Generalized Liouville ideals `L_F ⊆ L̃_F`, their `(0,1,0)`-initial ideals,
//! the kernel of `φ_F` and the comparison between them.

mod appendix;

use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::gb::{IdealHandle, Limits};
use crate::logder::{
    euler_and_seh_check, log_derivations, psi_f, theta_f, FactorizationSpec, Hypotheses, LogVariant,
};
use crate::ring::{BlockKind, MonomialOrder, Poly, VarContext};
use crate::weyl::{gr_symbol, Filtration};

pub use appendix::{
    appendix_suite, check_case, random_case, AppendixCase, AppendixOutcome, AppendixReport,
};

/// The three ideals of `ℚ[x, y, S]` attached to `F`.
#[derive(Clone, Debug)]
pub struct LiouvilleData {
    pub ctx: Arc<VarContext>,
    pub l_f: IdealHandle,
    pub ltilde_f: IdealHandle,
    pub in010_lf: IdealHandle,
}

fn y_weights(ctx: &VarContext) -> Vec<u32> {
    let ys = ctx.vars_of_kind(BlockKind::Y);
    (0..ctx.nvars()).map(|i| ys.contains(&i) as u32).collect()
}

/// `(0,1,1)` symbols of `ψ_F(Der(-log_0 f))` and of `θ_F`.
pub fn build_liouville_ideals(spec: &FactorizationSpec, limits: Limits) -> Result<LiouvilleData> {
    let ctx = spec.sym_ctx().clone();
    let mut l_gens = Vec::new();
    for d in log_derivations(spec.f(), LogVariant::Log0, limits)? {
        let op = psi_f(&d, spec)?;
        l_gens.push(gr_symbol(&op, Filtration::TotalOrder, &ctx)?);
    }
    let mut t_gens = l_gens.clone();
    for op in theta_f(spec, limits)? {
        t_gens.push(gr_symbol(&op, Filtration::TotalOrder, &ctx)?);
    }
    let l_f = IdealHandle::grevlex(&ctx, l_gens).with_limits(limits);
    let ltilde_f = IdealHandle::grevlex(&ctx, t_gens).with_limits(limits);
    let in010_lf = initial_ideal(&l_f, &y_weights(&ctx))?;
    Ok(LiouvilleData {
        ctx,
        l_f,
        ltilde_f,
        in010_lf,
    })
}

/// `In_u(I)` from a Gröbner basis under the `u`-refined grevlex order.
pub fn initial_ideal(i: &IdealHandle, u: &[u32]) -> Result<IdealHandle> {
    let ctx = i.ctx().clone();
    let refined = i.with_order(MonomialOrder::weighted(u));
    let gens: Vec<Poly> = refined
        .groebner_basis()?
        .iter()
        .map(|g| g.initial_form_weights(u))
        .collect();
    Ok(IdealHandle::grevlex(&ctx, gens).with_limits(i.limits()))
}

/// Context with one homogenizing variable appended; returns it and the
/// variable's index.
pub fn with_t(ctx: &VarContext) -> Result<(Arc<VarContext>, usize)> {
    let name = (0..)
        .map(|k| if k == 0 { "t".to_string() } else { format!("t{k}") })
        .find(|n| ctx.index_of(n).is_none())
        .expect("some name is free");
    let tctx = ctx.extended(BlockKind::T, "T", &[name])?;
    Ok((tctx, ctx.nvars()))
}

/// `HOM_u(p) = Σ c_m m t^{u(p) - u(m)}` in `tctx` (whose extra variable is
/// at index `t`).
pub fn homogenize_poly(p: &Poly, u: &[u32], tctx: &Arc<VarContext>, t: usize) -> Poly {
    let top = p.terms().iter().map(|(m, _)| m.weighted_degree(u)).max().unwrap_or(0);
    let terms = p.terms().iter().map(|(m, c)| {
        let mut e: Vec<u16> = m.exps().to_vec();
        e.resize(tctx.nvars(), 0);
        e[t] = (top - m.weighted_degree(u)) as u16;
        (crate::ring::Mono::from_slice(&e), c.clone())
    });
    Poly::from_terms(tctx, terms)
}

/// `HOM_u(I)`, generated by the homogenized elements of a `u`-refined
/// Gröbner basis, in the context with `t` appended.
pub fn homogenize_u(i: &IdealHandle, u: &[u32]) -> Result<IdealHandle> {
    let (tctx, t) = with_t(i.ctx())?;
    let refined = i.with_order(MonomialOrder::weighted(u));
    let gens: Vec<Poly> = refined
        .groebner_basis()?
        .iter()
        .map(|g| homogenize_poly(g, u, &tctx, t))
        .collect();
    Ok(IdealHandle::grevlex(&tctx, gens).with_limits(i.limits()))
}

/// Image of `y_i` under `φ_F`: `Σ_k (f/f_k)(∂_i f_k) s_k`, in the symbol context.
fn phi_y(spec: &FactorizationSpec, i: usize, s: &[Poly]) -> Poly {
    let f = spec.f();
    let mut acc = Poly::zero(spec.sym_ctx());
    for (k, fk) in spec.factors().iter().enumerate() {
        let q = f.div_exact(fk).expect("factor divides f");
        acc = &acc + &(&spec.to_sym(&(&q * &fk.derivative(i))) * &s[k]);
    }
    acc
}

/// `φ_F(p)`: `y_i ↦ Σ_k (f/f_k)(∂_i f_k) s_k`, `s_k ↦ f s_k`, `x` fixed.
pub fn phi_f_apply(spec: &FactorizationSpec, p: &Poly) -> Poly {
    let ctx = spec.sym_ctx();
    let n = spec.n();
    let s: Vec<Poly> = (0..spec.r()).map(|k| Poly::var(ctx, 2 * n + k)).collect();
    let fs = spec.to_sym(spec.f());
    let mut out = p.clone();
    for k in 0..spec.r() {
        out = out.substitute(2 * n + k, &(&fs * &s[k]));
    }
    for i in 0..n {
        out = out.substitute(n + i, &phi_y(spec, i, &s));
    }
    out
}

/// `ker φ_F` by eliminating fresh image variables from the graph ideal.
pub fn phi_f_kernel(spec: &FactorizationSpec, limits: Limits) -> Result<IdealHandle> {
    let ctx = spec.sym_ctx();
    let n = spec.n();
    let r = spec.r();
    let names: Vec<String> = (0..r)
        .map(|k| format!("{}_img", ctx.name(2 * n + k)))
        .collect();
    let big = ctx.extended(BlockKind::Other, "IMG", &names)?;
    let base = ctx.nvars();
    let lift: Vec<usize> = (0..ctx.nvars()).collect();
    let t: Vec<Poly> = (0..r).map(|k| Poly::var(&big, base + k)).collect();
    let f = spec.to_sym(spec.f()).remap(&big, &lift);
    let mut gens = Vec::new();
    for i in 0..n {
        let mut rhs = Poly::zero(&big);
        for (k, fk) in spec.factors().iter().enumerate() {
            let q = spec.f().div_exact(fk).expect("factor divides f");
            rhs = &rhs + &(&spec.to_sym(&(&q * &fk.derivative(i))).remap(&big, &lift) * &t[k]);
        }
        gens.push(&Poly::var(&big, n + i) - &rhs);
    }
    for (k, tk) in t.iter().enumerate() {
        gens.push(&Poly::var(&big, 2 * n + k) - &(&f * tk));
    }
    let drop: Vec<usize> = (base..base + r).collect();
    let elim = IdealHandle::grevlex(&big, gens).with_limits(limits).eliminate(&drop)?;
    let back: Vec<usize> = (0..big.nvars()).map(|i| i.min(base - 1)).collect();
    let kept: Vec<Poly> = elim.generators().iter().map(|g| g.remap(ctx, &back)).collect();
    Ok(IdealHandle::grevlex(ctx, kept).with_limits(limits))
}

/// `L_f + (σ(E))` for the product `f`, extended to `ℚ[x, y, S]`, plus `(S)`.
pub fn univariate_gr_ideal_plus_s(spec: &FactorizationSpec, limits: Limits) -> Result<IdealHandle> {
    let ctx = spec.sym_ctx();
    let mut gens: Vec<Poly> = log_derivations(spec.f(), LogVariant::Log0, limits)?
        .iter()
        .map(|d| d.symbol(ctx))
        .collect();
    if let Some(e) = euler_and_seh_check(spec.f()).field {
        gens.push(e.symbol(ctx));
    }
    gens.extend(spec.s_indices().into_iter().map(|i| Poly::var(ctx, i)));
    Ok(IdealHandle::grevlex(ctx, gens).with_limits(limits))
}

/// Extension of `L_f` (symbols `Σ a_i y_i` of `Der(-log_0 f)`) lies in
/// `In_{(0,1,0)} L_F`.
pub fn lf_extension_in_initial(spec: &FactorizationSpec, data: &LiouvilleData, limits: Limits) -> Result<bool> {
    for d in log_derivations(spec.f(), LogVariant::Log0, limits)? {
        if !data.in010_lf.contains(&d.symbol(&data.ctx))? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct GrEquality {
    pub l_in_ltilde: bool,
    pub ltilde_in_kernel: bool,
    pub ltilde_eq_kernel: bool,
    pub dim_ltilde: i64,
    pub dim_kernel: i64,
    /// Hypotheses under which `L̃_F = gr(Ann F^S)` follows.
    pub hypotheses_hold: bool,
    pub conclusion: String,
}

/// Compares `L̃_F` with `ker φ_F` by two-sided membership.
pub fn gr_equality_certificate(
    spec: &FactorizationSpec,
    hyps: &Hypotheses,
    limits: Limits,
) -> Result<GrEquality> {
    let data = build_liouville_ideals(spec, limits)?;
    let ker = phi_f_kernel(spec, limits)?;
    let l_in = data.ltilde_f.contains_ideal(&data.l_f)?;
    let t_in = ker.contains_ideal(&data.ltilde_f)?;
    let eq = t_in && data.ltilde_f.contains_ideal(&ker)?;
    let dim_ltilde = data.ltilde_f.krull_dimension()?;
    let dim_kernel = ker.krull_dimension()?;
    let hold = hyps.annihilator_by_derivations();
    let conclusion = match (eq, hold) {
        (true, true) => "L~_F = gr(Ann F^S) = ker phi_F; prime over Q as the kernel of a map into a domain".into(),
        (true, false) => "L~_F = ker phi_F (prime over Q); equality with gr(Ann F^S) not certified".into(),
        (false, _) => format!(
            "L~_F is strictly contained in ker phi_F (dimensions {dim_ltilde} and {dim_kernel})"
        ),
    };
    Ok(GrEquality {
        l_in_ltilde: l_in,
        ltilde_in_kernel: t_in,
        ltilde_eq_kernel: eq,
        dim_ltilde,
        dim_kernel,
        hypotheses_hold: hold,
        conclusion,
    })
}
