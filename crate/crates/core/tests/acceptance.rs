//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use dsalg::bside::{
    all_annihilate, ann_fs, bs_ideal, bs_variety_contains, hyperplane_containment,
    parameter_ring, rational_roots, zero_set_equals,
};
use dsalg::gb::{IdealHandle, Limits};
use dsalg::liouville::{appendix_suite, build_liouville_ideals, gr_equality_certificate, phi_f_kernel};
use dsalg::logder::{check_hypotheses, theta_f, FactorizationSpec, Hypotheses};
use dsalg::nabla::{nabla_batch, nabla_surjective, s_regularity_check};
use dsalg::par::Exec;
use dsalg::ring::{parse_poly, rat, ratio, Rat, VarContext};
use dsalg::spencer::{dual_lift_check, spencer_complex, verify_chain_conditions};
use dsalg::weyl::{act_on_poly, transpose_tau, WeylOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

struct Fixture {
    name: &'static str,
    spec: FactorizationSpec,
    arrangement: bool,
}

fn fixtures() -> Vec<Fixture> {
    let mk = |name, vars: &[&str], fs: &[&str], arrangement| Fixture {
        name,
        spec: FactorizationSpec::parse(vars, fs).unwrap(),
        arrangement,
    };
    vec![
        mk("(x)", &["x"], &["x"], true),
        mk("(x,y)", &["x", "y"], &["x", "y"], true),
        mk("(x,y,x+y)", &["x", "y"], &["x", "y", "x+y"], true),
        mk("(x,2x^2+yz)", &["x", "y", "z"], &["x", "2*x^2+y*z"], false),
        mk("(x1x2x3)", &["x1", "x2", "x3"], &["x1*x2*x3"], true),
    ]
}

fn setup(f: &Fixture) -> Result<(Hypotheses, dsalg::bside::Annihilator), String> {
    let l = Limits::default();
    let h = check_hypotheses(&f.spec, f.arrangement, l).map_err(e)?;
    let ann = ann_fs(&f.spec, &h, false, l).map_err(e)?;
    Ok((h, ann))
}

fn c1() -> Check {
    let spec = FactorizationSpec::parse(&["x", "y", "z"], &["x*(2*x^2+y*z)"]).unwrap();
    let l = Limits::default();
    let h = check_hypotheses(&spec, false, l).map_err(e)?;
    let ann = ann_fs(&spec, &h, false, l).map_err(e)?;
    let b = bs_ideal(&spec, &ann, l).map_err(e)?;
    let g = b.principal_generator.clone().ok_or("B_f not principal")?;
    let (roots, rest) = rational_roots(&g, 0);
    ensure(rest.is_constant(), format!("irrational part {rest}"))?;
    let want = vec![(rat(-1), 3), (ratio(-4, 3), 1), (ratio(-5, 3), 1)];
    ensure(roots == want, format!("roots {roots:?}"))?;
    let expect = parse_poly("(s+1)^3*(3*s+4)*(3*s+5)/9", &b.sctx).map_err(e)?;
    ensure(g == expect, format!("generator {g}"))?;
    Ok(format!("b_f = {g}"))
}

fn c2() -> Check {
    let spec = FactorizationSpec::parse(&["x", "y", "z"], &["x", "2*x^2+y*z"]).unwrap();
    let l = Limits::default();
    let h = check_hypotheses(&spec, false, l).map_err(e)?;
    let ann = ann_fs(&spec, &h, false, l).map_err(e)?;
    let b = bs_ideal(&spec, &ann, l).map_err(e)?;
    let sctx = parameter_ring(&spec).map_err(e)?;
    let p = parse_poly("(s1+1)*(s2+1)*(s1+2*s2+3)*(s1+2*s2+4)*(s1+2*s2+5)", &sctx).map_err(e)?;
    // V(B) ⊆ V(p): p^k ∈ B for small k; V(p) ⊆ V(B): p divides every generator
    ensure(zero_set_equals(&b, &p, 4).map_err(e)?, "zero sets differ")?;
    let upper_one = b.ideal().contains(&p).map_err(e)?;
    let (lo, hi) = (
        parse_poly("s1+2*s2+2", &sctx).map_err(e)?,
        parse_poly("s1+2*s2+6", &sctx).map_err(e)?,
    );
    ensure(!hyperplane_containment(&b, &lo).map_err(e)?, "k = 2 contained")?;
    ensure(!hyperplane_containment(&b, &hi).map_err(e)?, "k = 6 contained")?;
    Ok(format!(
        "{} generator(s); product in B: {upper_one}; index range k = 3..5",
        b.generators.len()
    ))
}

fn c3() -> Check {
    let f = &fixtures()[2];
    let (_, ann) = setup(f)?;
    let b = bs_ideal(&f.spec, &ann, Limits::default()).map_err(e)?;
    let sctx = parameter_ring(&f.spec).map_err(e)?;
    let form = parse_poly("s1+s2+s3+2", &sctx).map_err(e)?;
    ensure(hyperplane_containment(&b, &form).map_err(e)?, "not contained")?;
    Ok("s1+s2+s3+2 contained".into())
}

fn c4() -> Check {
    let l = Limits::default();
    for f in fixtures() {
        let (h, _) = setup(&f)?;
        let ops = theta_f(&f.spec, l).map_err(e)?;
        ensure(all_annihilate(&f.spec, &ops), format!("{}: an operator fails", f.name))?;
        let g = gr_equality_certificate(&f.spec, &h, l).map_err(e)?;
        ensure(g.ltilde_eq_kernel && g.l_in_ltilde, format!("{}: {}", f.name, g.conclusion))?;
    }
    Ok("5 fixtures".into())
}

fn c5() -> Check {
    let l = Limits::default();
    let mut notes = Vec::new();
    for f in fixtures() {
        let nr = (f.spec.n() + f.spec.r()) as i64;
        let d = build_liouville_ideals(&f.spec, l).map_err(e)?;
        let ker = phi_f_kernel(&f.spec, l).map_err(e)?;
        let (dt, dk) = (d.ltilde_f.krull_dimension().map_err(e)?, ker.krull_dimension().map_err(e)?);
        ensure(dt == nr && dk == nr, format!("{}: dims {dt}, {dk}, want {nr}", f.name))?;
        let (di, dl) = (d.in010_lf.krull_dimension().map_err(e)?, d.l_f.krull_dimension().map_err(e)?);
        ensure(di >= dl, format!("{}: dim In {di} < dim L {dl}", f.name))?;
        let cm = d.ltilde_f.is_cohen_macaulay().map_err(e)?;
        ensure(cm == Some(true), format!("{}: Cohen-Macaulay check gave {cm:?}", f.name))?;
        notes.push(format!("{}:{dt}", f.name));
    }
    // spot-checks of the test itself
    let c = VarContext::plain(&["a", "b", "c"]).unwrap();
    let p = |s: &str| parse_poly(s, &c).unwrap();
    let ci = IdealHandle::grevlex(&c, vec![p("a*b"), p("c^2")]);
    ensure(ci.is_cohen_macaulay().map_err(e)? == Some(true), "complete intersection")?;
    let mixed = IdealHandle::grevlex(&c, vec![p("a*b"), p("a*c")]);
    ensure(mixed.is_cohen_macaulay().map_err(e)? == Some(false), "(ab, ac) is mixed")?;
    Ok(notes.join(" "))
}

fn c6() -> Check {
    let r = appendix_suite(20_240_611, 24, Exec::default(), Limits::default()).map_err(e)?;
    let bad: Vec<&String> = r.cases.iter().filter(|(_, o)| !o.all()).map(|(d, _)| d).collect();
    ensure(bad.is_empty(), format!("failing: {bad:?}"))?;
    Ok(format!("{} random ideals", r.cases.len()))
}

fn grid(r: usize) -> Vec<Vec<Rat>> {
    let vals = [ratio(-1, 2), rat(0), rat(1), rat(2)];
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

fn c7() -> Check {
    let l = Limits::default();
    let one = rat(1);
    let mut checked = 0;
    for f in fixtures() {
        let (h, ann) = setup(&f)?;
        let b = bs_ideal(&f.spec, &ann, l).map_err(e)?;
        let pts = grid(f.spec.r());
        let reps = nabla_batch(&f.spec, &ann, &h, &pts, Exec::default(), l).map_err(e)?;
        for (a, rep) in pts.iter().zip(&reps) {
            let shifted: Vec<Rat> = a.iter().map(|x| x - &one).collect();
            if !bs_variety_contains(&b, &shifted) {
                checked += 1;
                ensure(rep.surjective, format!("{}: not onto at {a:?}", f.name))?;
            }
        }
        // diagonal points against the one-factor problem
        let g = f.spec.product().map_err(e)?;
        let (hg, anng) = {
            let hg = check_hypotheses(&g, f.arrangement, l).map_err(e)?;
            let anng = ann_fs(&g, &hg, false, l).map_err(e)?;
            (hg, anng)
        };
        for a in [rat(0), ratio(1, 3), rat(1)] {
            let diag = vec![a.clone(); f.spec.r()];
            let x = nabla_surjective(&f.spec, &ann, &h, &diag, false, l).map_err(e)?;
            let y = nabla_surjective(&g, &anng, &hg, &[a.clone()], false, l).map_err(e)?;
            ensure(
                x.surjective == y.surjective,
                format!("{}: diagonal mismatch at {a}", f.name),
            )?;
        }
    }
    let f = &fixtures()[2];
    let (h, ann) = setup(f)?;
    let rep = nabla_surjective(&f.spec, &ann, &h, &vec![ratio(1, 3); 3], false, l).map_err(e)?;
    ensure(!rep.surjective, "onto at A-1 = (-2/3,-2/3,-2/3)")?;
    ensure(rep.injectivity.verdict == dsalg::logder::Verdict::No, "injectivity not refuted")?;
    Ok(format!("{checked} points off V(B_F)"))
}

fn c8() -> Check {
    let l = Limits::default();
    for f in fixtures() {
        let r = s_regularity_check(&f.spec, l).map_err(e)?;
        ensure(r.regular, format!("{}: {:?}", f.name, r.steps))?;
        ensure(r.final_quotient_matches, format!("{}: final quotient", f.name))?;
    }
    Ok("5 fixtures".into())
}

fn c9() -> Check {
    let l = Limits::default();
    let free = [
        (vec!["x"], vec!["x"]),
        (vec!["x", "y"], vec!["x", "y"]),
        (vec!["x", "y", "z"], vec!["x*y*z"]),
        (vec!["x", "y"], vec!["x*y*(x+y)"]),
    ];
    for (v, fs) in &free {
        let spec = FactorizationSpec::parse(v, fs).unwrap();
        let cx = spencer_complex(&spec, l).map_err(e)?;
        let rep = verify_chain_conditions(&cx, l).map_err(e)?;
        ensure(rep.all(), format!("{fs:?}: {rep:?}"))?;
        ensure(dual_lift_check(&cx), format!("{fs:?}: dual lift"))?;
    }
    let spec = FactorizationSpec::parse(&["x", "y"], &["x", "y"]).unwrap();
    let ctx = spec.weyl_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let p = common::rand_weyl(&mut rng, ctx, 3, 4);
        let q = common::rand_weyl(&mut rng, ctx, 3, 4);
        ensure(transpose_tau(&transpose_tau(&p)) == p, format!("tau not involutive on {p}"))?;
        ensure(
            transpose_tau(&(&p * &q)) == &transpose_tau(&q) * &transpose_tau(&p),
            format!("tau not anti-multiplicative on {p}, {q}"),
        )?;
        ensure(transpose_tau(&(&p + &q)) == &transpose_tau(&p) + &transpose_tau(&q), "tau not additive")?;
    }
    Ok("4 free divisors, 200 operators".into())
}

fn c10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut members = 0;
    let mut total = 0;
    for k in 0..100 {
        let n = 2 + k % 2;
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let ctx = VarContext::plain(&names).unwrap();
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..ngens)
            .map(|_| {
                let (d, t) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                common::rand_homog(&mut rng, &ctx, d, t)
            })
            .filter(|g| !g.is_zero())
            .collect();
        let ideal = IdealHandle::grevlex(&ctx, gens.clone());
        let mut tests: Vec<_> = (0..3)
            .map(|_| {
                let (d, t) = (rng.gen_range(2..=4), rng.gen_range(1..=4));
                common::rand_homog(&mut rng, &ctx, d, t)
            })
            .collect();
        // constructed members
        let d = 4u32;
        let mut m = dsalg::ring::Poly::zero(&ctx);
        for g in &gens {
            let gd = g.total_degree() as u32;
            let h = common::rand_homog(&mut rng, &ctx, d - gd, 2);
            m = &m + &(&h * g);
        }
        tests.push(m);
        for t in &tests {
            let gb = ideal.contains(t).map_err(e)?;
            let oracle = common::macaulay_member(&gens, t);
            ensure(gb == oracle, format!("ideal {gens:?}: {t} gb={gb} oracle={oracle}"))?;
            members += gb as usize;
            total += 1;
        }
    }
    // Weyl products against the action on polynomials
    let spec = FactorizationSpec::parse(&["x", "y"], &["x*y"]).unwrap();
    let ctx = spec.weyl_ctx();
    let xs = [spec.x_index(0), spec.x_index(1)];
    let xd = [xs[0], xs[1], spec.d_index(0), spec.d_index(1)];
    for _ in 0..20 {
        let p = WeylOp::from_poly(common::rand_poly(&mut rng, ctx, &xd, 3, 4));
        let q = WeylOp::from_poly(common::rand_poly(&mut rng, ctx, &xd, 3, 4));
        let g = common::rand_poly(&mut rng, ctx, &xs, 5, 5);
        ensure(
            act_on_poly(&(&p * &q), &g) == act_on_poly(&p, &act_on_poly(&q, &g)),
            format!("action mismatch for {p}, {q} on {g}"),
        )?;
    }
    Ok(format!("{total} memberships ({members} members), 20 action checks"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, u64); 10] = [
        ("1 worked-example b-function", c1, 60),
        ("2 worked-example Bernstein-Sato ideal", c2, 300),
        ("3 arrangement hyperplane", c3, 300),
        ("4 annihilator by derivations", c4, 120),
        ("5 dimension and Cohen-Macaulay suite", c5, 120),
        ("6 homogenization property suite", c6, 180),
        ("7 shift map suite", c7, 300),
        ("8 regularity suite", c8, 120),
        ("9 Spencer suite", c9, 120),
        ("10 engine oracles", c10, 120),
    ];
    let mut failed = 0;
    for (name, f, budget) in criteria {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let r = match r {
            Ok(s) if dt > Duration::from_secs(budget) => Err(format!("{s}; over budget {budget}s")),
            other => other,
        };
        match r {
            Ok(s) => println!("PASS criterion {name} [{:.2}s] {s}", dt.as_secs_f64()),
            Err(s) => {
                failed += 1;
                println!("FAIL criterion {name} [{:.2}s] {s}", dt.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
