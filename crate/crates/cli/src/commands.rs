use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use dsalg::arrange::{arrangement_analyze, ArrangementSpec};
use dsalg::bside::{
    ann_fs, bs_ideal_with_order, bs_variety_contains, functional_equation_witness,
    hyperplane_containment, parameter_ring, rational_roots, Annihilator, BSResult, Validity,
};
use dsalg::gb::{IdealHandle, Limits};
use dsalg::liouville::{
    appendix_suite, build_liouville_ideals, gr_equality_certificate, lf_extension_in_initial,
};
use dsalg::logder::{
    check_hypotheses, log_derivations, saito_basis, FactorizationSpec, Hypotheses, LogVariant,
};
use dsalg::nabla::{nabla_surjective, s_regularity_check};
use dsalg::par::Exec;
use dsalg::ring::rat::fmt_rat;
use dsalg::ring::{parse_poly, MonomialOrder, OrderKind, Poly, Rat, VarContext};
use dsalg::spencer::{dual_lift_check, spencer_complex, verify_chain_conditions};
use serde_json::{json, Value};

use crate::problem::{parse_with_caret, Problem};
use crate::Args;

/// What a command produced, before it is wrapped in a report.
pub struct Outcome {
    pub result: Value,
    pub hypotheses: Option<Hypotheses>,
    pub caveats: Vec<String>,
    /// A theorem precondition failed; the result is still emitted.
    pub hypothesis_failure: bool,
}

impl Outcome {
    fn plain(result: Value) -> Self {
        Outcome {
            result,
            hypotheses: None,
            caveats: Vec::new(),
            hypothesis_failure: false,
        }
    }
}

fn gens(i: &IdealHandle) -> anyhow::Result<Vec<String>> {
    Ok(i.groebner_basis()?.iter().map(|p| p.to_string()).collect())
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Elimination order for `x` and `d` in the Weyl context.
fn elimination_order(spec: &FactorizationSpec, name: &str) -> anyhow::Result<MonomialOrder> {
    let n = spec.weyl_ctx().nvars();
    let drop: Vec<usize> = (0..2 * spec.n()).collect();
    let rest: Vec<usize> = (2 * spec.n()..n).collect();
    let block = |inner: OrderKind| {
        MonomialOrder::new(
            OrderKind::Block {
                blocks: vec![(drop.clone(), inner), (rest.clone(), OrderKind::Grevlex)],
            },
            n,
        )
    };
    Ok(match name {
        "elim" | "grevlex" => MonomialOrder::elimination(n, &drop, None),
        "elim-lex" | "lex" => block(OrderKind::Lex)?,
        "elim-weighted" => {
            // d weighted above x inside the eliminated block
            let w: Vec<u32> = (0..n).map(|i| if i < spec.n() { 1 } else if i < 2 * spec.n() { 2 } else { 1 }).collect();
            MonomialOrder::elimination(n, &drop, Some(&w))
        }
        other => bail!("unknown order `{other}` (expected elim, elim-lex or elim-weighted)"),
    })
}

struct Gate {
    hyps: Hypotheses,
    ann: Annihilator,
    caveats: Vec<String>,
    failure: bool,
}

fn gate(p: &Problem, assume: bool, limits: Limits) -> anyhow::Result<Gate> {
    let hyps = check_hypotheses(&p.spec, p.arrangement.is_some(), limits)?;
    let ann = ann_fs(&p.spec, &hyps, assume, limits)?;
    let mut caveats = Vec::new();
    let failure = match ann.validity {
        Validity::Full => false,
        Validity::Assumed => {
            caveats.push(
                "HYPOTHESES ASSUMED, NOT VERIFIED: the annihilator is taken to be generated by derivations"
                    .into(),
            );
            false
        }
        Validity::ContainedOnly => {
            caveats.push(
                "hypotheses not established: results use D[S]*theta_F, which is only contained in Ann F^S"
                    .into(),
            );
            true
        }
    };
    Ok(Gate {
        hyps,
        ann,
        caveats,
        failure,
    })
}

impl Gate {
    fn finish(self, result: Value) -> Outcome {
        Outcome {
            result,
            hypotheses: Some(self.hyps),
            caveats: self.caveats,
            hypothesis_failure: self.failure,
        }
    }
}

fn parse_point(text: &str, r: usize) -> anyhow::Result<Vec<Rat>> {
    let a = text
        .split(',')
        .map(|t| Rat::from_str(t.trim()).map_err(|_| anyhow!("bad coordinate `{t}` in --point")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if a.len() != r {
        bail!("--point has {} coordinates, expected {r}", a.len());
    }
    Ok(a)
}

fn bs_payload(b: &BSResult, spec: &FactorizationSpec) -> Value {
    let (components, rest) = b.components(spec);
    json!({
        "generators": strings(&b.generators),
        "principal": b.principal_generator.is_some(),
        "principal_generator": b.principal_generator.as_ref().map(|g| g.to_string()),
        "hyperplane_components": components,
        "unfactored_part": rest.map(|p| p.to_string()),
        "validity": b.validity.describe(),
    })
}

/// `(s+1)^3*(3*s+4)*(3*s+5)/9` from the roots of a monic polynomial.
fn factored(roots: &[(Rat, u32)], var: &str, rest: &Poly) -> String {
    use num_traits::{One, Signed, Zero};
    let mut parts = Vec::new();
    let mut denom = num_bigint::BigInt::one();
    for (a, m) in roots {
        let (p, q) = (a.numer().clone(), a.denom().clone());
        let lead = if q.is_one() { var.to_string() } else { format!("{q}*{var}") };
        // q*s - p
        let f = if p.is_zero() {
            lead
        } else if p.is_negative() {
            format!("({lead}+{})", -p)
        } else {
            format!("({lead}-{p})")
        };
        for _ in 0..*m {
            denom *= &q;
        }
        parts.push(if *m > 1 { format!("{f}^{m}") } else { f });
    }
    if !rest.is_constant() {
        parts.push(format!("({rest})"));
    }
    let body = if parts.is_empty() { "1".into() } else { parts.join("*") };
    if denom.is_one() {
        body
    } else {
        format!("{body}/{denom}")
    }
}

pub fn run(cmd: &str, args: &Args, problem: Option<&Problem>) -> anyhow::Result<Outcome> {
    let need = || problem.ok_or_else(|| anyhow!("`{cmd}` needs --input FILE"));
    let limits = |p: &Problem| p.limits(args.max_degree, args.max_basis);
    match cmd {
        "appendix-check" => {
            let l = Limits {
                max_degree: args.max_degree.unwrap_or(Limits::default().max_degree),
                max_basis: args.max_basis.unwrap_or(Limits::default().max_basis),
            };
            let rep = appendix_suite(args.seed, args.count, Exec::default(), l)?;
            let fails = rep.cases.len() - rep.count(|o| o.all());
            let mut out = Outcome::plain(json!({
                "seed": rep.seed,
                "cases": rep.cases.iter().map(|(d, o)| json!({"case": d, "outcome": o})).collect::<Vec<_>>(),
                "all_pass": rep.all_pass(),
            }));
            if fails > 0 {
                out.caveats.push(format!("{fails} case(s) failed"));
            }
            Ok(out)
        }
        "hypotheses" => {
            let p = need()?;
            let h = check_hypotheses(&p.spec, p.arrangement.is_some(), limits(p))?;
            let res = json!({
                "factorization": p.spec.describe(),
                "annihilator_by_derivations": h.annihilator_by_derivations(),
                "reduced_free": h.reduced_free(),
            });
            Ok(Outcome {
                result: res,
                hypotheses: Some(h),
                caveats: Vec::new(),
                hypothesis_failure: false,
            })
        }
        "logder" => {
            let p = need()?;
            let l = limits(p);
            let f = p.spec.f();
            let with = |v| -> anyhow::Result<Vec<String>> {
                Ok(log_derivations(f, v, l)?
                    .iter()
                    .map(|d| d.with_factors(p.spec.factors()).map(|d| d.to_string()))
                    .collect::<dsalg::Result<_>>()?)
            };
            let basis = saito_basis(f, l)?;
            Ok(Outcome::plain(json!({
                "der_log": with(LogVariant::Log)?,
                "der_log0": with(LogVariant::Log0)?,
                "saito_basis": basis.map(|b| b.iter().map(|d| d.with_factors(p.spec.factors()).map(|d| d.to_string())).collect::<dsalg::Result<Vec<_>>>()).transpose()?,
            })))
        }
        "theta" => {
            let p = need()?;
            let g = gate(p, args.assume_hypotheses, limits(p))?;
            let res = json!({
                "theta_f": strings(&g.ann.generators),
                "annihilate_verified": true,
                "validity": g.ann.validity.describe(),
            });
            Ok(g.finish(res))
        }
        "liouville" => {
            let p = need()?;
            let d = build_liouville_ideals(&p.spec, limits(p))?;
            Ok(Outcome::plain(json!({
                "ring": d.ctx.names(),
                "l_f": gens(&d.l_f)?,
                "ltilde_f": gens(&d.ltilde_f)?,
                "in010_l_f": gens(&d.in010_lf)?,
                "dim_l_f": d.l_f.krull_dimension()?,
                "dim_ltilde_f": d.ltilde_f.krull_dimension()?,
                "dim_in010_l_f": d.in010_lf.krull_dimension()?,
            })))
        }
        "gr-check" => {
            let p = need()?;
            let l = limits(p);
            let h = check_hypotheses(&p.spec, p.arrangement.is_some(), l)?;
            let cert = gr_equality_certificate(&p.spec, &h, l)?;
            let d = build_liouville_ideals(&p.spec, l)?;
            let ext = lf_extension_in_initial(&p.spec, &d, l)?;
            let cm = d.ltilde_f.is_cohen_macaulay()?;
            let mut out = Outcome {
                result: json!({
                    "certificate": cert,
                    "l_f_extension_in_initial": ext,
                    "ltilde_cohen_macaulay": cm,
                    "expected_dimension": p.spec.n() + p.spec.r(),
                }),
                hypotheses: Some(h),
                caveats: Vec::new(),
                hypothesis_failure: false,
            };
            if !cert.hypotheses_hold {
                out.caveats.push("equality with gr(Ann F^S) not certified: hypotheses not established".into());
            }
            Ok(out)
        }
        "bs-ideal" | "bs-poly" | "witness" | "hyperplane" | "nabla" => {
            let p = need()?;
            let l = limits(p);
            let spec = if cmd == "bs-poly" { p.spec.product()? } else { p.spec.clone() };
            // the gate for bs-poly is about f alone
            let tmp;
            let gp = if cmd == "bs-poly" {
                tmp = Problem {
                    file: p.file.clone(),
                    spec: spec.clone(),
                    arrangement: p.arrangement.clone(),
                };
                &tmp
            } else {
                p
            };
            let g = gate(gp, args.assume_hypotheses, l)?;
            let order_name = p.order_name(args.order.as_deref());
            let order = elimination_order(&spec, &order_name)?;
            if cmd == "nabla" {
                let a = parse_point(args.point.as_deref().context("nabla needs --point")?, spec.r())?;
                let rep = nabla_surjective(&spec, &g.ann, &g.hyps, &a, true, l)?;
                let b = bs_ideal_with_order(&spec, &g.ann, l, order)?;
                let shifted: Vec<Rat> = a.iter().map(|x| x - Rat::from_integer(1.into())).collect();
                let res = json!({
                    "report": rep,
                    "shifted_point_in_bs_variety": bs_variety_contains(&b, &shifted),
                });
                return Ok(g.finish(res));
            }
            let b = bs_ideal_with_order(&spec, &g.ann, l, order)?;
            let sctx = parameter_ring(&spec)?;
            let res = match cmd {
                "bs-ideal" => {
                    let mut v = bs_payload(&b, &spec);
                    v["order"] = json!(order_name);
                    v
                }
                "bs-poly" => {
                    let g0 = b
                        .principal_generator
                        .clone()
                        .ok_or_else(|| anyhow!("B_f is not principal"))?;
                    let (roots, rest) = rational_roots(&g0, 0);
                    json!({
                        "generator": g0.to_string(),
                        "factored": factored(&roots, sctx.name(0), &rest),
                        "roots": roots.iter().map(|(a, m)| json!({"root": fmt_rat(a), "multiplicity": m})).collect::<Vec<_>>(),
                        "degree": g0.total_degree(),
                        "validity": b.validity.describe(),
                    })
                }
                "witness" => {
                    let target = match args.form.as_deref() {
                        Some(t) => parse_with_caret(t, &sctx, "--form")?,
                        None => b
                            .principal_generator
                            .clone()
                            .ok_or_else(|| anyhow!("B_F is not principal; pass --form"))?,
                    };
                    let q = functional_equation_witness(&spec, &g.ann, &target, l)?;
                    json!({
                        "b": target.to_string(),
                        "operator": q.to_string(),
                        "verified": true,
                    })
                }
                _ => {
                    let text = args.form.as_deref().context("hyperplane needs --form")?;
                    let form = parse_with_caret(text, &sctx, "--form")?;
                    json!({
                        "form": form.to_string(),
                        "contained": hyperplane_containment(&b, &form)?,
                        "bs_generators": strings(&b.generators),
                    })
                }
            };
            Ok(g.finish(res))
        }
        "regularity" => {
            let p = need()?;
            let rep = s_regularity_check(&p.spec, limits(p))?;
            Ok(Outcome::plain(serde_json::to_value(rep)?))
        }
        "spencer" => {
            let p = need()?;
            let l = limits(p);
            let cx = spencer_complex(&p.spec, l)?;
            let chain = verify_chain_conditions(&cx, l)?;
            let n = cx.n();
            let structure: Vec<Value> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| json!({"i": i + 1, "j": j + 1, "c": strings(&cx.structure[i][j])}))
                .collect();
            Ok(Outcome::plain(json!({
                "basis": cx.basis.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "lambdas": strings(&cx.lambdas),
                "structure_constants": structure,
                "subsets": cx.subsets.iter().map(|s| s.iter().map(|x| x.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "differentials": cx.render(),
                "chain": chain,
                "dual_lift": dual_lift_check(&cx),
            })))
        }
        "arrangement" => {
            let p = need()?;
            let a = match &p.arrangement {
                Some(a) => a.clone(),
                None => {
                    let ctx = VarContext::plain(&p.file.variables)?;
                    let forms = p
                        .file
                        .factors
                        .iter()
                        .map(|f| parse_poly(f, &ctx))
                        .collect::<dsalg::Result<Vec<_>>>()?;
                    ArrangementSpec::simple(forms)?
                }
            };
            let rep = arrangement_analyze(&a);
            Ok(Outcome::plain(json!({
                "forms": strings(&a.forms),
                "multiplicities": a.multiplicities,
                "report": rep,
            })))
        }
        other => bail!("unknown command `{other}`"),
    }
}
