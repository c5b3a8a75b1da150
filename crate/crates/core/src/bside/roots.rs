use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::ring::{Mono, Poly, Rat};

/// A factor with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub factor: String,
    pub multiplicity: u32,
    #[serde(skip)]
    pub poly: Poly,
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// Rational roots with multiplicities of a univariate polynomial in variable
/// `var`, plus the cofactor without rational roots. Roots sorted descending.
pub fn rational_roots(p: &Poly, var: usize) -> (Vec<(Rat, u32)>, Poly) {
    let ctx = p.ctx().clone();
    let mut rest = p.primitive();
    let mut roots: Vec<(Rat, u32)> = Vec::new();
    let x = Poly::var(&ctx, var);
    // zero root
    let mut zero_mult = 0;
    while !rest.is_zero() && rest.constant_term().is_zero() && !rest.is_constant() {
        rest = rest.div_exact(&x).expect("x divides");
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    loop {
        if rest.total_degree() <= 0 {
            break;
        }
        let coeffs = rest.coefficients_in(var);
        let lead = coeffs.last().expect("nonzero").constant_term();
        let cst = coeffs[0].constant_term();
        let (Some(ps), Some(qs)) = (divisors(cst.numer()), divisors(lead.numer())) else {
            break;
        };
        let mut found = None;
        'search: for q in &qs {
            for pn in &ps {
                if pn.gcd(q) != BigInt::one() {
                    continue;
                }
                for sign in [-1, 1] {
                    let r = Rat::new(pn * BigInt::from(sign), q.clone());
                    if rest.eval_var(var, &r).is_zero() {
                        found = Some(r);
                        break 'search;
                    }
                }
            }
        }
        let Some(r) = found else { break };
        // q x - p
        let lin = &x.scale(&Rat::from_integer(r.denom().clone()))
            - &Poly::constant(&ctx, Rat::from_integer(r.numer().clone()));
        let mut m = 0;
        while let Some(q) = rest.div_exact(&lin) {
            rest = q;
            m += 1;
        }
        roots.push((r, m));
    }
    roots.sort_by(|a, b| b.0.cmp(&a.0));
    (roots, rest)
}

/// Linear factors `Σ a_k s_k + c` (small nonnegative integer normals,
/// positive integer constants) of a polynomial, found by trial division.
pub fn hyperplane_factors(p: &Poly, vars: &[usize], max_coeff: u32, max_const: i64) -> (Vec<Factor>, Poly) {
    let ctx = p.ctx().clone();
    let mut rest = p.primitive();
    let mut out = Vec::new();
    let r = vars.len();
    let mut normal = vec![0u32; r];
    loop {
        // odometer over normals
        let mut pos = 0;
        loop {
            if pos == r {
                return finish(out, rest);
            }
            if normal[pos] < max_coeff {
                normal[pos] += 1;
                break;
            }
            normal[pos] = 0;
            pos += 1;
        }
        let g = normal.iter().fold(0u32, |a, &b| a.gcd(&b));
        if g != 1 {
            continue;
        }
        let mut lin = Poly::zero(&ctx);
        for (k, &a) in normal.iter().enumerate() {
            if a > 0 {
                lin = &lin + &Poly::monomial(&ctx, Mono::var(ctx.nvars(), vars[k], 1), Rat::from_integer(a.into()));
            }
        }
        for c in 0..=max_const {
            if rest.total_degree() <= 0 {
                return finish(out, rest);
            }
            let l = &lin + &Poly::constant(&ctx, Rat::from_integer(c.into()));
            let mut m = 0;
            while let Some(q) = rest.div_exact(&l) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                out.push(Factor {
                    factor: l.to_string(),
                    multiplicity: m,
                    poly: l,
                });
            }
        }
    }
}

fn finish(mut out: Vec<Factor>, rest: Poly) -> (Vec<Factor>, Poly) {
    out.sort_by(|a, b| a.factor.cmp(&b.factor));
    (out, rest)
}
