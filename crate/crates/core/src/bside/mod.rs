//! The annihilator `D[S]·θ_F`, Bernstein–Sato ideals by elimination,
//! functional equations and hyperplane checks.

mod roots;

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gb::{IdealHandle, Limits};
use crate::logder::{theta_f, FactorizationSpec, Hypotheses};
use crate::ring::{BlockKind, MonomialOrder, Poly, Rat, VarContext};
use crate::weyl::{apply_to_fs, FSAction, WeylIdeal, WeylOp};

pub use roots::{hyperplane_factors, rational_roots, Factor};

/// How much of the annihilator the derivation generators are known to give.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    /// Equal to `Ann F^S`: every hypothesis was checked.
    Full,
    /// Equality taken on the user's word.
    Assumed,
    /// Only `D[S]·θ_F ⊆ Ann F^S` is known.
    ContainedOnly,
}

impl Validity {
    pub fn describe(self) -> &'static str {
        match self {
            Validity::Full => "equals Ann F^S (generated by derivations; hypotheses checked)",
            Validity::Assumed => "equals Ann F^S under assumed hypotheses",
            Validity::ContainedOnly => "contained in Ann F^S",
        }
    }
}

/// `D[S]·θ_F` with its provenance.
#[derive(Clone, Debug)]
pub struct Annihilator {
    pub generators: Vec<WeylOp>,
    pub validity: Validity,
}

/// Generators of `θ_F`, each verified to annihilate `F^S`.
pub fn ann_fs(spec: &FactorizationSpec, hyps: &Hypotheses, assume: bool, limits: Limits) -> Result<Annihilator> {
    let gens = theta_f(spec, limits)?;
    let act = FSAction::new(spec);
    for g in &gens {
        if !act.apply(g, &act.one()).is_zero() {
            return Err(Error::InvalidInput(format!("{g} does not annihilate F^S")));
        }
    }
    let validity = if hyps.annihilator_by_derivations() {
        Validity::Full
    } else if assume {
        Validity::Assumed
    } else {
        Validity::ContainedOnly
    };
    Ok(Annihilator {
        generators: gens,
        validity,
    })
}

#[derive(Clone, Debug)]
pub struct BSResult {
    /// Ring `ℚ[S]`.
    pub sctx: Arc<VarContext>,
    /// Reduced Gröbner basis (grevlex) of `B_F`.
    pub generators: Vec<Poly>,
    /// Monic generator when `B_F` is principal.
    pub principal_generator: Option<Poly>,
    pub validity: Validity,
}

impl BSResult {
    pub fn ideal(&self) -> IdealHandle {
        IdealHandle::grevlex(&self.sctx, self.generators.clone())
    }

    /// Linear factors of the principal generator with multiplicities.
    pub fn components(&self, spec: &FactorizationSpec) -> (Vec<Factor>, Option<Poly>) {
        let Some(b) = &self.principal_generator else {
            return (Vec::new(), None);
        };
        let r = self.sctx.nvars();
        let maxd = spec.degrees().into_iter().max().unwrap_or(1).max(1) as u32;
        let bound = (spec.degrees().iter().sum::<i64>() + spec.n() as i64) * 2 + 2;
        let (fs, rest) = hyperplane_factors(b, &(0..r).collect::<Vec<_>>(), maxd + 1, bound);
        let rest = (!rest.is_constant()).then_some(rest);
        (fs, rest)
    }
}

/// Ring `ℚ[S]` matching the parameter block of the Weyl context.
pub fn parameter_ring(spec: &FactorizationSpec) -> Result<Arc<VarContext>> {
    let names: Vec<String> = spec
        .s_indices()
        .iter()
        .map(|&i| spec.weyl_ctx().name(i).to_string())
        .collect();
    VarContext::new(&[(BlockKind::S, "S", names)])
}

fn to_param(spec: &FactorizationSpec, sctx: &Arc<VarContext>, p: &Poly) -> Poly {
    let base = 2 * spec.n();
    let map: Vec<usize> = (0..p.ctx().nvars()).map(|i| i.saturating_sub(base)).collect();
    p.remap(sctx, &map)
}

fn from_param(spec: &FactorizationSpec, p: &Poly) -> Poly {
    let base = 2 * spec.n();
    let map: Vec<usize> = (0..p.ctx().nvars()).map(|i| i + base).collect();
    p.remap(spec.weyl_ctx(), &map)
}

/// `D[S]·θ_F + D[S]·f` as a left ideal under `order`.
pub fn annihilator_plus_f(spec: &FactorizationSpec, ann: &Annihilator, order: MonomialOrder) -> WeylIdeal {
    let mut gens = ann.generators.clone();
    gens.push(spec.to_weyl_op(spec.f()));
    WeylIdeal::new(spec.weyl_ctx(), gens, order)
}

/// Eliminates `x` and `d` from `D[S]θ_F + D[S]f`.
pub fn bs_ideal(spec: &FactorizationSpec, ann: &Annihilator, limits: Limits) -> Result<BSResult> {
    let drop: Vec<usize> = (0..2 * spec.n()).collect();
    bs_ideal_with_order(spec, ann, limits, MonomialOrder::elimination(spec.weyl_ctx().nvars(), &drop, None))
}

/// Same as [`bs_ideal`] with an explicit elimination order (which must
/// eliminate every `x` and `d`).
pub fn bs_ideal_with_order(
    spec: &FactorizationSpec,
    ann: &Annihilator,
    limits: Limits,
    order: MonomialOrder,
) -> Result<BSResult> {
    let drop: Vec<usize> = (0..2 * spec.n()).collect();
    let ideal = annihilator_plus_f(spec, ann, order).with_limits(limits);
    let elim = ideal.basis_free_of(&drop)?;
    let sctx = parameter_ring(spec)?;
    let polys: Vec<Poly> = elim.iter().map(|g| to_param(spec, &sctx, g.poly())).collect();
    let gb = IdealHandle::grevlex(&sctx, polys).with_limits(limits);
    let generators = gb.groebner_basis()?.to_vec();
    let principal_generator = (generators.len() == 1).then(|| generators[0].monic());
    Ok(BSResult {
        sctx,
        generators,
        principal_generator,
        validity: ann.validity,
    })
}

/// `Q` with `Q • F^{S+1} = b(S) F^S`, extracted from a tracked membership of
/// `b` in `D[S]θ_F + D[S]f` and verified by the formal calculus.
pub fn functional_equation_witness(
    spec: &FactorizationSpec,
    ann: &Annihilator,
    b: &Poly,
    limits: Limits,
) -> Result<WeylOp> {
    let bw = WeylOp::from_poly(from_param(spec, b));
    let ideal = annihilator_plus_f(spec, ann, MonomialOrder::grevlex(spec.weyl_ctx().nvars()))
        .with_limits(limits)
        .with_tracking(true);
    let cof = ideal
        .certificate(&bw)?
        .ok_or_else(|| Error::WitnessExtractionFailed(format!("{b} is not in the ideal")))?;
    let q = cof.last().expect("f is the last generator").clone();
    if !verify_witness(spec, &q, &bw) {
        return Err(Error::WitnessExtractionFailed("verification failed".into()));
    }
    Ok(q)
}

/// `Q • (f F^S) = b F^S`.
pub fn verify_witness(spec: &FactorizationSpec, q: &WeylOp, b: &WeylOp) -> bool {
    let act = FSAction::new(spec);
    let lhs = act.apply(q, &act.element(spec.to_weyl(spec.f())));
    let rhs = act.element(b.poly().clone());
    lhs == rhs
}

/// Whether the hyperplane `ℓ = 0` lies in `V(B)`.
pub fn hyperplane_containment(b: &BSResult, l: &Poly) -> Result<bool> {
    if l.total_degree() != 1 {
        return Err(Error::InvalidInput("expected a nonconstant affine-linear form".into()));
    }
    let ctx = &b.sctx;
    let l = l.remap(ctx, &(0..l.ctx().nvars()).collect::<Vec<_>>());
    let j = (0..ctx.nvars())
        .find(|&j| l.involves(j))
        .expect("nonconstant");
    let aj = l.coeff(&crate::ring::Mono::var(ctx.nvars(), j, 1));
    // s_j = -(ℓ - a_j s_j) / a_j
    let rest = &l - &Poly::var(ctx, j).scale(&aj);
    let sol = rest.scale(&(-aj.recip()));
    Ok(b.generators.iter().all(|g| g.substitute(j, &sol).is_zero()))
}

/// Zero set of `B` contains the point `a`.
pub fn bs_variety_contains(b: &BSResult, a: &[Rat]) -> bool {
    b.generators.iter().all(|g| g.eval(a).is_zero())
}

/// `V(B) = V(p)` for a squarefree `p`: every generator is a multiple of `p`
/// and some power of `p` lies in `B`.
pub fn zero_set_equals(b: &BSResult, p: &Poly, max_power: u32) -> Result<bool> {
    let p = p.remap(&b.sctx, &(0..p.ctx().nvars()).collect::<Vec<_>>());
    if !b.generators.iter().all(|g| g.div_exact(&p).is_some()) {
        return Ok(false);
    }
    let ideal = b.ideal();
    let mut q = p.clone();
    for _ in 0..max_power {
        if ideal.contains(&q)? {
            return Ok(true);
        }
        q = &q * &p;
    }
    Ok(false)
}

/// Compares the image of `θ_F` under `s_{r-1}, s_r ↦ t` with `θ_G` for the
/// coarsening `G = (f_1, …, f_{r-1} f_r)`.
pub fn diagonal_restriction_check(spec: &FactorizationSpec, limits: Limits) -> Result<bool> {
    let g = spec.coarsen_last_two()?;
    let n = spec.n();
    let r = spec.r();
    let map: Vec<usize> = (0..spec.weyl_ctx().nvars())
        .map(|i| if i < 2 * n + r - 1 { i } else { 2 * n + r - 2 })
        .collect();
    let img: Vec<WeylOp> = theta_f(spec, limits)?
        .into_iter()
        .map(|op| WeylOp::from_poly(op.poly().remap(g.weyl_ctx(), &map)))
        .collect();
    let tg = theta_f(&g, limits)?;
    let a = WeylIdeal::grevlex(g.weyl_ctx(), img).with_limits(limits);
    let b = WeylIdeal::grevlex(g.weyl_ctx(), tg).with_limits(limits);
    a.equals(&b)
}

/// `s_k ↦ s` for every `k`: the diagonal image of a polynomial in `ℚ[S]`.
pub fn diagonal_image(b: &Poly, target: &Arc<VarContext>) -> Poly {
    let map = vec![0; b.ctx().nvars()];
    b.remap(target, &map)
}

pub fn all_annihilate(spec: &FactorizationSpec, ops: &[WeylOp]) -> bool {
    ops.iter().all(|o| apply_to_fs(o, spec).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logder::check_hypotheses;
    use crate::ring::{parse_poly, ratio};

    fn setup(vars: &[&str], fs: &[&str], arrangement: bool) -> (FactorizationSpec, Annihilator) {
        let spec = FactorizationSpec::parse(vars, fs).unwrap();
        let h = check_hypotheses(&spec, arrangement, Limits::default()).unwrap();
        let ann = ann_fs(&spec, &h, false, Limits::default()).unwrap();
        (spec, ann)
    }

    #[test]
    fn smooth_hypersurface() {
        let (spec, ann) = setup(&["x"], &["x"], false);
        assert_eq!(ann.validity, Validity::Full);
        let b = bs_ideal(&spec, &ann, Limits::default()).unwrap();
        assert_eq!(b.principal_generator.as_ref().unwrap().to_string(), "s + 1");
        let q = functional_equation_witness(&spec, &ann, &b.generators[0], Limits::default()).unwrap();
        assert_eq!(q.to_string(), "dx");
        let l = parse_poly("s+2", &b.sctx).unwrap();
        assert!(!hyperplane_containment(&b, &l).unwrap());
    }

    #[test]
    fn coordinate_cross() {
        let (spec, ann) = setup(&["x", "y"], &["x", "y"], false);
        let b = bs_ideal(&spec, &ann, Limits::default()).unwrap();
        let expect = parse_poly("(s1+1)*(s2+1)", &b.sctx).unwrap();
        assert_eq!(b.principal_generator.as_ref().unwrap(), &expect);
        let q = functional_equation_witness(&spec, &ann, &expect, Limits::default()).unwrap();
        assert!(verify_witness(&spec, &q, &WeylOp::from_poly(from_param(&spec, &expect))));
        assert!(bs_variety_contains(&b, &[ratio(-1, 1), ratio(5, 1)]));
        assert!(!bs_variety_contains(&b, &[ratio(0, 1), ratio(0, 1)]));
    }

    #[test]
    fn worked_example_two_factors() {
        let (spec, ann) = setup(&["x", "y", "z"], &["x", "2*x^2+y*z"], false);
        assert_eq!(ann.validity, Validity::Full);
        let b = bs_ideal(&spec, &ann, Limits::default()).unwrap();
        let p = parse_poly("(s1+1)*(s2+1)*(s1+2*s2+3)*(s1+2*s2+4)*(s1+2*s2+5)", &b.sctx).unwrap();
        assert!(zero_set_equals(&b, &p, 4).unwrap());
        let l = parse_poly("s1+2*s2+4", &b.sctx).unwrap();
        assert!(hyperplane_containment(&b, &l).unwrap());
        let l6 = parse_poly("s1+2*s2+6", &b.sctx).unwrap();
        assert!(!hyperplane_containment(&b, &l6).unwrap());
    }

    #[test]
    fn univariate_roots_of_worked_example() {
        let (spec, ann) = setup(&["x", "y", "z"], &["x*(2*x^2+y*z)"], false);
        let b = bs_ideal(&spec, &ann, Limits::default()).unwrap();
        let g = b.principal_generator.unwrap();
        let (roots, rest) = rational_roots(&g, 0);
        assert!(rest.is_constant());
        assert_eq!(
            roots,
            vec![(ratio(-1, 1), 3), (ratio(-4, 3), 1), (ratio(-5, 3), 1)]
        );
    }

    #[test]
    fn diagonal_restrictions() {
        let l = Limits::default();
        for (v, fs) in [
            (vec!["x", "y"], vec!["x", "y"]),
            (vec!["x", "y", "z"], vec!["x", "2*x^2+y*z"]),
            (vec!["x", "y"], vec!["x", "y", "x+y"]),
        ] {
            let spec = FactorizationSpec::parse(&v, &fs).unwrap();
            assert!(diagonal_restriction_check(&spec, l).unwrap(), "{fs:?}");
        }
    }

    #[test]
    fn elimination_order_independence() {
        let (spec, ann) = setup(&["x", "y"], &["x", "y", "x+y"], true);
        let b1 = bs_ideal(&spec, &ann, Limits::default()).unwrap();
        let n = spec.weyl_ctx().nvars();
        let drop: Vec<usize> = (0..4).collect();
        let w: Vec<u32> = (0..n).map(|i| if i < 2 { 2 } else { 1 }).collect();
        let b2 = bs_ideal_with_order(&spec, &ann, Limits::default(), MonomialOrder::elimination(n, &drop, Some(&w)))
            .unwrap();
        assert!(b1.ideal().equals(&b2.ideal()).unwrap());
        let l = parse_poly("s1+s2+s3+2", &b1.sctx).unwrap();
        assert!(hyperplane_containment(&b1, &l).unwrap());
    }
}
