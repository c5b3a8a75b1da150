//! The shift map `∇_A`: surjectivity by membership of `1`, Bernstein–Sato
//! variety membership, and the regularity of `S` on the Liouville quotient.

use num_traits::One;
use serde::Serialize;

use crate::bside::{bs_variety_contains, Annihilator, BSResult, Validity};
use crate::error::{Error, Result};
use crate::gb::{IdealHandle, Limits};
use crate::liouville::{build_liouville_ideals, univariate_gr_ideal_plus_s};
use crate::logder::{FactorizationSpec, Hypotheses, Verdict};
use crate::par::Exec;
use crate::ring::{rat::fmt_rat, Poly, Rat};
use crate::weyl::{WeylIdeal, WeylOp};

#[derive(Clone, Debug, Serialize)]
pub struct Injectivity {
    pub verdict: Verdict,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NablaReport {
    pub point: Vec<String>,
    /// `A - 1`, where the generators are evaluated.
    pub shifted: Vec<String>,
    pub surjective: bool,
    pub injectivity: Injectivity,
    pub basis_of_reasoning: String,
    /// Left cofactors `Q_i` with `Σ Q_i g_i = 1`, generators in the order
    /// `θ_F(A-1)…, f`. Present when surjective and requested.
    pub certificate: Option<Vec<String>>,
    pub validity: Validity,
}

fn injectivity(surjective: bool, hyps: &Hypotheses) -> Injectivity {
    if hyps.reduced_free() {
        Injectivity {
            verdict: Verdict::from_bool(surjective),
            reason: "reduced and free: injective if and only if surjective".into(),
        }
    } else if hyps.annihilator_by_derivations() {
        if surjective {
            Injectivity {
                verdict: Verdict::Unknown,
                reason: "strongly Euler-homogeneous, Saito-holonomic, tame: injective implies surjective; converse not available".into(),
            }
        } else {
            Injectivity {
                verdict: Verdict::No,
                reason: "strongly Euler-homogeneous, Saito-holonomic, tame: injective implies surjective, so not injective".into(),
            }
        }
    } else {
        Injectivity {
            verdict: Verdict::Unknown,
            reason: "hypotheses for the injectivity theorems not established".into(),
        }
    }
}

/// `∇_A` is onto exactly when `1 ∈ D_n·(θ_F|_{S=A-1}, f)`.
pub fn nabla_surjective(
    spec: &FactorizationSpec,
    ann: &Annihilator,
    hyps: &Hypotheses,
    a: &[Rat],
    with_certificate: bool,
    limits: Limits,
) -> Result<NablaReport> {
    if a.len() != spec.r() {
        return Err(Error::InvalidInput(format!(
            "point has {} coordinates, expected {}",
            a.len(),
            spec.r()
        )));
    }
    let shifted: Vec<Rat> = a.iter().map(|x| x - Rat::one()).collect();
    let mut gens: Vec<WeylOp> = ann.generators.iter().map(|g| g.specialize_s(&shifted)).collect();
    gens.push(spec.to_weyl_op(spec.f()));
    let one = WeylOp::one(spec.weyl_ctx());
    let ideal = WeylIdeal::grevlex(spec.weyl_ctx(), gens.clone())
        .with_limits(limits)
        .with_tracking(with_certificate);
    let surjective = ideal.contains(&one)?;
    let certificate = if surjective && with_certificate {
        let cof = ideal
            .certificate(&one)?
            .ok_or_else(|| Error::InvalidInput("membership without certificate".into()))?;
        let sum = cof
            .iter()
            .zip(&gens)
            .fold(WeylOp::zero(spec.weyl_ctx()), |acc, (q, g)| &acc + &(q * g));
        if sum != one {
            return Err(Error::InvalidInput("certificate does not reduce to 1".into()));
        }
        Some(cof.iter().map(|q| q.to_string()).collect())
    } else {
        None
    };
    Ok(NablaReport {
        point: a.iter().map(fmt_rat).collect(),
        shifted: shifted.iter().map(fmt_rat).collect(),
        surjective,
        injectivity: injectivity(surjective, hyps),
        basis_of_reasoning: "left ideal membership of 1 after specializing S to A-1".into(),
        certificate,
        validity: ann.validity,
    })
}

/// [`nabla_surjective`] at many points, without certificates.
pub fn nabla_batch(
    spec: &FactorizationSpec,
    ann: &Annihilator,
    hyps: &Hypotheses,
    points: &[Vec<Rat>],
    exec: Exec,
    limits: Limits,
) -> Result<Vec<NablaReport>> {
    exec.try_map(points, |a| nabla_surjective(spec, ann, hyps, a, false, limits))
}

/// `A ∈ V(B)`.
pub fn bs_variety_membership(b: &BSResult, a: &[Rat]) -> bool {
    bs_variety_contains(b, a)
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityStep {
    pub variable: String,
    /// `(L̃_F + (s_j : j before) : s_i) = L̃_F + (s_j : j before)`.
    pub regular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub steps: Vec<RegularityStep>,
    /// `L̃_F + (S) = L_f + (σ(E)) + (S)`.
    pub final_quotient_matches: bool,
    pub regular: bool,
}

/// `s_1, …, s_r` regular on `ℚ[x, y, S]/L̃_F`, in the order given by `order`
/// (indices into the parameters).
pub fn s_regularity_check_order(
    spec: &FactorizationSpec,
    order: &[usize],
    limits: Limits,
) -> Result<RegularityReport> {
    let data = build_liouville_ideals(spec, limits)?;
    let ctx = data.ctx.clone();
    let svars = spec.s_indices();
    let mut cur: Vec<Poly> = data.ltilde_f.generators().to_vec();
    let mut steps = Vec::new();
    for &k in order {
        let s = Poly::var(&ctx, svars[k]);
        let j = IdealHandle::grevlex(&ctx, cur.clone()).with_limits(limits);
        let regular = j.contains_ideal(&j.colon(&s)?)?;
        steps.push(RegularityStep {
            variable: ctx.name(svars[k]).to_string(),
            regular,
        });
        cur.push(s);
    }
    let all_s = IdealHandle::grevlex(&ctx, cur).with_limits(limits);
    let target = univariate_gr_ideal_plus_s(spec, limits)?;
    let final_quotient_matches = all_s.equals(&target)?;
    let regular = steps.iter().all(|s| s.regular) && final_quotient_matches;
    Ok(RegularityReport {
        steps,
        final_quotient_matches,
        regular,
    })
}

pub fn s_regularity_check(spec: &FactorizationSpec, limits: Limits) -> Result<RegularityReport> {
    let order: Vec<usize> = (0..spec.r()).collect();
    s_regularity_check_order(spec, &order, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bside::{ann_fs, bs_ideal};
    use crate::logder::check_hypotheses;
    use crate::ring::{rat, ratio};

    fn setup(vars: &[&str], fs: &[&str], arr: bool) -> (FactorizationSpec, Hypotheses, Annihilator) {
        let spec = FactorizationSpec::parse(vars, fs).unwrap();
        let h = check_hypotheses(&spec, arr, Limits::default()).unwrap();
        let ann = ann_fs(&spec, &h, false, Limits::default()).unwrap();
        (spec, h, ann)
    }

    #[test]
    fn coordinate_cross_points() {
        let (spec, h, ann) = setup(&["x", "y"], &["x", "y"], false);
        let l = Limits::default();
        let r = nabla_surjective(&spec, &ann, &h, &[rat(1), rat(1)], true, l).unwrap();
        assert!(r.surjective);
        assert_eq!(r.certificate.as_ref().unwrap().len(), 3);
        let r0 = nabla_surjective(&spec, &ann, &h, &[rat(0), rat(0)], false, l).unwrap();
        assert!(!r0.surjective);
        assert_eq!(r0.injectivity.verdict, Verdict::No);
    }

    #[test]
    fn variety_membership() {
        let (spec, _, ann) = setup(&["x", "y"], &["x", "y"], false);
        let b = bs_ideal(&spec, &ann, Limits::default()).unwrap();
        assert!(bs_variety_membership(&b, &[rat(-1), rat(5)]));
        assert!(!bs_variety_membership(&b, &[rat(0), rat(0)]));
        let (spec1, _, ann1) = setup(&["x", "y", "z"], &["x*(2*x^2+y*z)"], false);
        let b1 = bs_ideal(&spec1, &ann1, Limits::default()).unwrap();
        assert!(bs_variety_membership(&b1, &[ratio(-4, 3)]));
    }

    #[test]
    fn arrangement_converse() {
        let (spec, h, ann) = setup(&["x", "y"], &["x", "y", "x+y"], true);
        let a = vec![ratio(1, 3); 3];
        let r = nabla_surjective(&spec, &ann, &h, &a, false, Limits::default()).unwrap();
        assert!(!r.surjective);
        assert_eq!(r.injectivity.verdict, Verdict::No);
    }

    #[test]
    fn batch_matches_single() {
        let (spec, h, ann) = setup(&["x", "y"], &["x", "y"], false);
        let pts: Vec<Vec<Rat>> = (-2..3).flat_map(|a| (-2..3).map(move |b| vec![rat(a), rat(b)])).collect();
        let l = Limits::default();
        let par = nabla_batch(&spec, &ann, &h, &pts, Exec::Parallel, l).unwrap();
        let seq = nabla_batch(&spec, &ann, &h, &pts, Exec::Sequential, l).unwrap();
        for ((p, a), b) in pts.iter().zip(&par).zip(&seq) {
            assert_eq!(a.surjective, b.surjective);
            // B_F = ((s1+1)(s2+1)): onto exactly off the lines a_i = 0
            assert_eq!(a.surjective, !p.iter().any(|x| *x == rat(0)));
        }
    }

    #[test]
    fn regularity() {
        let l = Limits::default();
        for (v, fs) in [
            (vec!["x", "y"], vec!["x", "y"]),
            (vec!["x"], vec!["x"]),
            (vec!["x", "y", "z"], vec!["x", "2*x^2+y*z"]),
        ] {
            let spec = FactorizationSpec::parse(&v, &fs).unwrap();
            let r = s_regularity_check(&spec, l).unwrap();
            assert!(r.regular, "{fs:?}: {r:?}");
            let rev: Vec<usize> = (0..spec.r()).rev().collect();
            assert!(s_regularity_check_order(&spec, &rev, l).unwrap().regular);
        }
    }
}
