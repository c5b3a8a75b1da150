//! Logarithmic derivations, Saito bases, Euler fields, the map `ψ_F` and the
//! hypothesis checks (reducedness, freeness, tameness, Saito-holonomicity).

mod factorization;
mod forms;
mod hypotheses;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gb::{
    find_positive_grading, minimal_generators, syzygies, GradedModulePresentation, IdealHandle,
    Limits, Submodule,
};
use crate::ring::{determinant, BlockKind, Poly, Rat, VarContext};
use crate::weyl::WeylOp;

pub use factorization::FactorizationSpec;
pub use forms::{log_forms_pdim, tameness_check, TamenessReport};
pub use hypotheses::{check_hypotheses, Hypotheses, Verdict};

/// `δ = Σ a_i ∂_i` with cofactors `δ·f_k = b_k f_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDerivation {
    pub coeffs: Vec<Poly>,
    pub cofactors: Vec<Poly>,
}

impl fmt::Display for LogDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = self.coeffs[0].ctx();
        let mut parts = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let d = format!("d{}", ctx.name(i));
            if a.is_constant() && a.constant_term() == Rat::one() {
                parts.push(d);
            } else if a.len() == 1 {
                parts.push(format!("{a}*{d}"));
            } else {
                parts.push(format!("({a})*{d}"));
            }
        }
        let mut body = String::new();
        for (k, t) in parts.iter().enumerate() {
            match (k, t.strip_prefix('-')) {
                (0, _) => body.push_str(t),
                (_, Some(rest)) => body.push_str(&format!(" - {rest}")),
                (_, None) => body.push_str(&format!(" + {t}")),
            }
        }
        if body.is_empty() {
            body.push('0');
        }
        let cof: Vec<String> = self.cofactors.iter().map(|b| b.to_string()).collect();
        write!(f, "{body} ; cofactors {}", cof.join(","))
    }
}

impl LogDerivation {
    pub fn ctx(&self) -> &Arc<VarContext> {
        self.coeffs[0].ctx()
    }

    /// `δ·p`.
    pub fn apply(&self, p: &Poly) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(p.ctx()), |acc, (i, a)| &acc + &(a * &p.derivative(i)))
    }

    /// Cofactors against a new list of factors, by exact division.
    pub fn with_factors(&self, factors: &[Poly]) -> Result<LogDerivation> {
        let mut cof = Vec::with_capacity(factors.len());
        for (k, fk) in factors.iter().enumerate() {
            let b = self
                .apply(fk)
                .div_exact(fk)
                .ok_or(Error::NotLogarithmicForFactor(k + 1))?;
            cof.push(b);
        }
        Ok(LogDerivation {
            coeffs: self.coeffs.clone(),
            cofactors: cof,
        })
    }

    /// Verifies every cofactor identity exactly.
    pub fn verify(&self, factors: &[Poly]) -> bool {
        factors.len() == self.cofactors.len()
            && factors
                .iter()
                .zip(&self.cofactors)
                .all(|(fk, b)| self.apply(fk) == b * fk)
    }

    /// `Σ a_i ∂_i` as an operator.
    pub fn to_weyl(&self, spec: &FactorizationSpec) -> WeylOp {
        let ctx = spec.weyl_ctx();
        let mut p = Poly::zero(ctx);
        for (i, a) in self.coeffs.iter().enumerate() {
            p = &p + &(&spec.to_weyl(a) * &Poly::var(ctx, spec.d_index(i)));
        }
        WeylOp::from_poly(p)
    }

    /// Principal symbol `Σ a_i y_i` in a ring `ℚ[x, y, …]` whose first `2n`
    /// variables are `x` then `y`.
    pub fn symbol(&self, target: &Arc<VarContext>) -> Poly {
        let n = self.coeffs.len();
        let map: Vec<usize> = (0..n).collect();
        let mut p = Poly::zero(target);
        for (i, a) in self.coeffs.iter().enumerate() {
            p = &p + &(&a.remap(target, &map) * &Poly::var(target, n + i));
        }
        p
    }

    pub fn scale(&self, c: &Rat) -> LogDerivation {
        LogDerivation {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
            cofactors: self.cofactors.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LogVariant {
    /// `δ·f ∈ (f)`.
    Log,
    /// `δ·f = 0`.
    Log0,
}

fn primitive_vector(v: &[Poly]) -> Vec<Poly> {
    let Some(lead) = v.iter().find(|p| !p.is_zero()) else {
        return v.to_vec();
    };
    let all: Vec<Rat> = v
        .iter()
        .flat_map(|p| p.terms().iter().map(|(_, c)| c.clone()))
        .collect();
    let mut c = crate::ring::rat::content(all.iter());
    if lead.terms()[0].1.is_negative() {
        c = -c;
    }
    v.iter().map(|p| p.scale(&c.recip())).collect()
}

/// Module generators of `Der(-log f)` (or `Der(-log_0 f)`), each with the
/// cofactor of `f` (zero for the `log_0` variant).
pub fn log_derivations(f: &Poly, variant: LogVariant, limits: Limits) -> Result<Vec<LogDerivation>> {
    if f.is_constant() {
        return Err(Error::InvalidInput("f must be nonconstant".into()));
    }
    let ctx = f.ctx();
    let n = ctx.nvars();
    let mut cols: Vec<Vec<Poly>> = (0..n).map(|i| vec![f.derivative(i)]).collect();
    if variant == LogVariant::Log {
        cols.push(vec![-f]);
    }
    let syz = syzygies(ctx, &cols, limits)?;
    let weights = find_positive_grading(std::slice::from_ref(f));
    let gens: Vec<Vec<Poly>> = syz.into_iter().map(|v| primitive_vector(&v)).collect();
    let pruned: Vec<Vec<Poly>> = match &weights {
        Some(w) => {
            let mut cold: Vec<i64> = w.iter().map(|&x| -(x as i64)).collect();
            if variant == LogVariant::Log {
                cold.push(0);
            }
            let pres = GradedModulePresentation {
                ctx: ctx.clone(),
                weights: w.clone(),
                col_degrees: cold,
                generators: gens,
            };
            minimal_generators(&pres, limits)?
                .into_iter()
                .map(|(v, _)| v)
                .collect()
        }
        None => prune_greedy(ctx, gens, limits)?,
    };
    Ok(pruned
        .into_iter()
        .map(|v| {
            let coeffs = v[..n].to_vec();
            let cof = if variant == LogVariant::Log {
                v[n].clone()
            } else {
                Poly::zero(ctx)
            };
            LogDerivation {
                coeffs,
                cofactors: vec![cof],
            }
        })
        .collect())
}

fn prune_greedy(ctx: &Arc<VarContext>, gens: Vec<Vec<Poly>>, limits: Limits) -> Result<Vec<Vec<Poly>>> {
    let rank = gens.first().map_or(0, |g| g.len());
    let mut kept = gens;
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        let others: Vec<Vec<Poly>> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        if Submodule::new(ctx, rank, others, limits).contains(&kept[i])? {
            kept.remove(i);
        }
    }
    Ok(kept)
}

/// `ψ_F(δ) = δ - Σ s_k b_k` where `δ·f_k = b_k f_k`.
pub fn psi_f(delta: &LogDerivation, spec: &FactorizationSpec) -> Result<WeylOp> {
    let d = delta.with_factors(spec.factors())?;
    let mut op = d.to_weyl(spec).into_poly();
    for (k, b) in d.cofactors.iter().enumerate() {
        op = &op - &(&spec.to_weyl(b) * &spec.s_var(k));
    }
    Ok(WeylOp::from_poly(op))
}

/// Generators of `θ_F = ψ_F(Der(-log f))`.
pub fn theta_f(spec: &FactorizationSpec, limits: Limits) -> Result<Vec<WeylOp>> {
    log_derivations(spec.f(), LogVariant::Log, limits)?
        .iter()
        .map(|d| psi_f(d, spec))
        .collect()
}

/// Coefficient matrix (rows = derivations).
pub fn coefficient_matrix(basis: &[LogDerivation]) -> Vec<Vec<Poly>> {
    basis.iter().map(|d| d.coeffs.clone()).collect()
}

/// `n` logarithmic derivations whose coefficient determinant is a nonzero
/// constant times `f` (Saito's criterion), if such a subset of the low-degree
/// generators exists.
pub fn saito_basis(f: &Poly, limits: Limits) -> Result<Option<Vec<LogDerivation>>> {
    let n = f.ctx().nvars();
    let mut gens = log_derivations(f, LogVariant::Log, limits)?;
    if gens.len() < n {
        return Ok(None);
    }
    let weights = find_positive_grading(std::slice::from_ref(f));
    if let Some(w) = &weights {
        gens.sort_by_key(|d| {
            d.coeffs
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| a.weighted_degree(w).unwrap_or(0) as i64 - w[i] as i64)
                .max()
                .unwrap_or(0)
        });
    }
    let pool = &gens[..gens.len().min(2 * n)];
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let subset: Vec<LogDerivation> = idx.iter().map(|&i| pool[i].clone()).collect();
        if let Some(_c) = saito_constant(f, &subset) {
            return Ok(Some(subset));
        }
        // next n-combination of pool indices
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            if idx[k] < pool.len() - n + k {
                idx[k] += 1;
                for j in k + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `det / f` when it is a nonzero constant.
pub fn saito_constant(f: &Poly, basis: &[LogDerivation]) -> Option<Rat> {
    let det = determinant(&coefficient_matrix(basis), f.ctx());
    let q = det.div_exact(f)?;
    (q.is_constant() && !q.is_zero()).then(|| q.constant_term())
}

/// Projective dimension of `Der(-log f)` when `f` is quasi-homogeneous.
pub fn der_log_pdim(f: &Poly, limits: Limits) -> Result<Option<i64>> {
    let Some(w) = find_positive_grading(std::slice::from_ref(f)) else {
        return Ok(None);
    };
    let gens = log_derivations(f, LogVariant::Log, limits)?;
    let pres = GradedModulePresentation {
        ctx: f.ctx().clone(),
        weights: w.clone(),
        col_degrees: w.iter().map(|&x| -(x as i64)).collect(),
        generators: gens.into_iter().map(|d| d.coeffs).collect(),
    };
    Ok(Some(crate::gb::graded_free_resolution(&pres, limits)?.pdim()))
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    /// Positive weights making `f` weighted-homogeneous.
    pub weights: Option<Vec<u32>>,
    /// `E` with `E·f = f`, in canonical text.
    pub euler: Option<String>,
    pub strong_at_origin: Verdict,
    #[serde(skip)]
    pub field: Option<LogDerivation>,
}

/// Euler field `E = Σ (w_i / d) x_i ∂_i` for quasi-homogeneous `f`.
pub fn euler_and_seh_check(f: &Poly) -> EulerReport {
    let Some(w) = find_positive_grading(std::slice::from_ref(f)) else {
        return EulerReport {
            weights: None,
            euler: None,
            strong_at_origin: Verdict::Unknown,
            field: None,
        };
    };
    let ctx = f.ctx();
    let d = f.weighted_degree(&w).unwrap_or(0);
    let coeffs: Vec<Poly> = (0..ctx.nvars())
        .map(|i| Poly::var(ctx, i).scale(&Rat::new(w[i].into(), d.into())))
        .collect();
    let e = LogDerivation {
        coeffs,
        cofactors: vec![Poly::one(ctx)],
    };
    debug_assert_eq!(e.apply(f), f.clone());
    EulerReport {
        weights: Some(w),
        euler: Some(e.to_string()),
        // E vanishes at the origin and f(0) = 0 for positive weights
        strong_at_origin: Verdict::Yes,
        field: Some(e),
    }
}

/// Ring `ℚ[x, y]` of symbols of vector fields on the variables of `xctx`.
pub fn symbol_ring(xctx: &Arc<VarContext>) -> Result<Arc<VarContext>> {
    let xs: Vec<String> = xctx.names().to_vec();
    let ys: Vec<String> = xs.iter().map(|x| format!("y_{x}")).collect();
    VarContext::new(&[(BlockKind::X, "X", xs), (BlockKind::Y, "Y", ys)])
}

/// True when the principal symbols of `basis` form a regular sequence in
/// `ℚ[x, y]`, tested by successive colon ideals.
pub fn koszul_free_check(basis: &[LogDerivation], limits: Limits) -> Result<bool> {
    let Some(first) = basis.first() else { return Ok(true) };
    let ring = symbol_ring(first.ctx())?;
    let syms: Vec<Poly> = basis.iter().map(|d| d.symbol(&ring)).collect();
    is_regular_sequence(&ring, &IdealHandle::grevlex(&ring, vec![]), &syms, limits)
}

/// `seq` is regular on `R / base`: each element is a nonzerodivisor modulo
/// the previous ones and the final quotient is nonzero.
pub fn is_regular_sequence(
    ring: &Arc<VarContext>,
    base: &IdealHandle,
    seq: &[Poly],
    limits: Limits,
) -> Result<bool> {
    let mut cur = base.generators().to_vec();
    for g in seq {
        let i = IdealHandle::grevlex(ring, cur.clone()).with_limits(limits);
        if !i.is_zero_ideal() {
            let col = i.colon(g)?;
            if !i.contains_ideal(&col)? {
                return Ok(false);
            }
        } else if g.is_zero() {
            return Ok(false);
        }
        cur.push(g.clone());
    }
    Ok(!IdealHandle::grevlex(ring, cur).with_limits(limits).is_unit()?)
}

/// `f` is squarefree exactly when its singular locus `V(f, ∂f)` has
/// codimension at least two.
pub fn is_reduced(f: &Poly, limits: Limits) -> Result<bool> {
    let ctx = f.ctx();
    let mut gens = vec![f.clone()];
    gens.extend((0..ctx.nvars()).map(|i| f.derivative(i)));
    let i = IdealHandle::grevlex(ctx, gens).with_limits(limits);
    Ok(i.krull_dimension()? <= ctx.nvars() as i64 - 2)
}

/// Dimension of the logarithmic characteristic variety `V(σ(Der(-log f)))`
/// in `ℚ[x, y]`; `f` is Saito-holonomic exactly when this equals `n`.
pub fn log_characteristic_dimension(f: &Poly, limits: Limits) -> Result<i64> {
    let ring = symbol_ring(f.ctx())?;
    let syms: Vec<Poly> = log_derivations(f, LogVariant::Log, limits)?
        .iter()
        .map(|d| d.symbol(&ring))
        .collect();
    IdealHandle::grevlex(&ring, syms).with_limits(limits).krull_dimension()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn lim() -> Limits {
        Limits::default()
    }

    fn module_of(ds: &[LogDerivation]) -> Submodule {
        let ctx = ds[0].ctx().clone();
        let n = ctx.nvars();
        Submodule::new(&ctx, n, ds.iter().map(|d| d.coeffs.clone()).collect(), lim())
    }

    fn fields(ctx: &Arc<VarContext>, rows: &[&[&str]]) -> Vec<LogDerivation> {
        rows.iter()
            .map(|r| LogDerivation {
                coeffs: r.iter().map(|s| parse_poly(s, ctx).unwrap()).collect(),
                cofactors: vec![],
            })
            .collect()
    }

    #[test]
    fn normal_crossing_fields() {
        let c = VarContext::plain(&["x", "y"]).unwrap();
        let f = parse_poly("x*y", &c).unwrap();
        let ds = log_derivations(&f, LogVariant::Log, lim()).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(module_of(&ds).equals(&module_of(&fields(&c, &[&["x", "0"], &["0", "y"]]))).unwrap());
        for d in &ds {
            assert!(d.verify(std::slice::from_ref(&f)));
        }
        let d0 = log_derivations(&f, LogVariant::Log0, lim()).unwrap();
        assert_eq!(d0.len(), 1);
        assert!(module_of(&d0).equals(&module_of(&fields(&c, &[&["x", "-y"]]))).unwrap());
    }

    #[test]
    fn smooth_divisor() {
        let c = VarContext::plain(&["x", "y", "z"]).unwrap();
        let f = parse_poly("x", &c).unwrap();
        let ds = log_derivations(&f, LogVariant::Log, lim()).unwrap();
        let expect = fields(&c, &[&["x", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        assert!(module_of(&ds).equals(&module_of(&expect)).unwrap());
    }

    #[test]
    fn quasi_euler_is_logarithmic() {
        let c = VarContext::plain(&["x", "y", "z"]).unwrap();
        let f = parse_poly("2*x^3 + x*y*z", &c).unwrap();
        let ds = log_derivations(&f, LogVariant::Log, lim()).unwrap();
        let e1 = fields(&c, &[&["1/3*x", "2/3*y", "0"]]);
        assert_eq!(e1[0].apply(&f), f);
        assert!(module_of(&ds).contains(&e1[0].coeffs).unwrap());
    }

    #[test]
    fn psi_examples() {
        let spec = FactorizationSpec::parse(&["x"], &["x"]).unwrap();
        let c = spec.xctx();
        let d = fields(c, &[&["x"]]);
        assert_eq!(psi_f(&d[0], &spec).unwrap().to_string(), "x*dx - s");
        let dx = fields(c, &[&["1"]]);
        assert_eq!(psi_f(&dx[0], &spec).unwrap_err(), Error::NotLogarithmicForFactor(1));

        let spec2 = FactorizationSpec::parse(&["x", "y", "z"], &["x", "2*x^2+y*z"]).unwrap();
        let e1 = fields(spec2.xctx(), &[&["1/3*x", "2/3*y", "0"]]);
        let op = psi_f(&e1[0], &spec2).unwrap();
        assert_eq!(op.to_string(), "1/3*x*dx + 2/3*y*dy - 1/3*s1 - 2/3*s2");
    }

    #[test]
    fn saito_bases() {
        for (vars, f) in [
            (vec!["x", "y"], "x*y"),
            (vec!["x", "y"], "x*y*(x+y)"),
            (vec!["x", "y", "z"], "x*y*z"),
        ] {
            let c = VarContext::plain(&vars).unwrap();
            let f = parse_poly(f, &c).unwrap();
            let b = saito_basis(&f, lim()).unwrap().expect("free");
            assert_eq!(b.len(), vars.len());
            assert!(saito_constant(&f, &b).is_some());
            assert!(koszul_free_check(&b, lim()).unwrap());
        }
        let c = VarContext::plain(&["x", "y", "z"]).unwrap();
        let f = parse_poly("x*(2*x^2+y*z)", &c).unwrap();
        assert!(saito_basis(&f, lim()).unwrap().is_none());
    }

    #[test]
    fn euler_fields() {
        let c = VarContext::plain(&["x", "y", "z"]).unwrap();
        let f = parse_poly("2*x^3 + x*y*z", &c).unwrap();
        let r = euler_and_seh_check(&f);
        assert_eq!(r.euler.as_deref(), Some("1/3*x*dx + 1/3*y*dy + 1/3*z*dz ; cofactors 1"));
        let g = parse_poly("x", &c).unwrap();
        assert_eq!(euler_and_seh_check(&g).strong_at_origin, Verdict::Yes);
    }

    #[test]
    fn reducedness() {
        let c = VarContext::plain(&["x", "y"]).unwrap();
        assert!(is_reduced(&parse_poly("x*y*(x+y)", &c).unwrap(), lim()).unwrap());
        assert!(!is_reduced(&parse_poly("x^2*y", &c).unwrap(), lim()).unwrap());
    }
}
