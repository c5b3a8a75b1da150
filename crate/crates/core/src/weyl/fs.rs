use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use super::WeylOp;
use crate::logder::FactorizationSpec;
use crate::ring::{Mono, Poly, Rat};

/// `(numerator / f^pole) F^S` with the numerator a polynomial in `x` and `S`
/// (stored in the Weyl context with no derivative exponents).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSElement {
    pub numerator: Poly,
    pub pole: u32,
}

impl fmt::Display for FSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pole == 0 {
            write!(f, "({}) F^S", self.numerator)
        } else {
            write!(f, "({}) / f^{} F^S", self.numerator, self.pole)
        }
    }
}

impl FSElement {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// Formal calculus on `ℚ[x, S][1/f] F^S` for a fixed factorization.
pub struct FSAction<'a> {
    spec: &'a FactorizationSpec,
    f: Poly,
    df: Vec<Poly>,
    /// `Σ_k s_k (f / f_k) ∂_i f_k`
    log_grad: Vec<Poly>,
}

impl<'a> FSAction<'a> {
    pub fn new(spec: &'a FactorizationSpec) -> Self {
        let n = spec.n();
        let f = spec.to_weyl(spec.f());
        let df = (0..n).map(|i| f.derivative(i)).collect();
        let cofs: Vec<Poly> = spec
            .factors()
            .iter()
            .map(|fk| {
                let q = spec.f().div_exact(fk).expect("factor divides the product");
                spec.to_weyl(&q)
            })
            .collect();
        let log_grad = (0..n)
            .map(|i| {
                let mut acc = Poly::zero(spec.weyl_ctx());
                for (k, fk) in spec.factors().iter().enumerate() {
                    let d = spec.to_weyl(&fk.derivative(i));
                    acc = &acc + &(&(&spec.s_var(k) * &cofs[k]) * &d);
                }
                acc
            })
            .collect();
        FSAction {
            spec,
            f,
            df,
            log_grad,
        }
    }

    pub fn one(&self) -> FSElement {
        FSElement {
            numerator: Poly::one(self.spec.weyl_ctx()),
            pole: 0,
        }
    }

    /// `h F^S` for a polynomial `h` in `x`, `S`.
    pub fn element(&self, h: Poly) -> FSElement {
        self.reduce(FSElement {
            numerator: h,
            pole: 0,
        })
    }

    /// Divide out factors of `f` from the numerator while a pole remains.
    pub fn reduce(&self, mut e: FSElement) -> FSElement {
        if e.numerator.is_zero() {
            e.pole = 0;
            return e;
        }
        while e.pole > 0 {
            match e.numerator.div_exact(&self.f) {
                Some(q) => {
                    e.numerator = q;
                    e.pole -= 1;
                }
                None => break,
            }
        }
        e
    }

    pub fn add(&self, a: &FSElement, b: &FSElement) -> FSElement {
        let p = a.pole.max(b.pole);
        let na = &a.numerator * &self.f.pow(p - a.pole);
        let nb = &b.numerator * &self.f.pow(p - b.pole);
        self.reduce(FSElement {
            numerator: &na + &nb,
            pole: p,
        })
    }

    /// `∂_i • e`.
    pub fn partial(&self, i: usize, e: &FSElement) -> FSElement {
        if e.is_zero() {
            return e.clone();
        }
        let h = &e.numerator;
        let j = Rat::from_integer(e.pole.into());
        let num = &(&(&h.derivative(i) * &self.f) - &(&h.scale(&j) * &self.df[i])) + &(h * &self.log_grad[i]);
        self.reduce(FSElement {
            numerator: num,
            pole: e.pole + 1,
        })
    }

    /// `P • e`.
    pub fn apply(&self, p: &WeylOp, e: &FSElement) -> FSElement {
        let n = self.spec.n();
        let mut memo: HashMap<Vec<u16>, FSElement> = HashMap::new();
        memo.insert(vec![0; n], e.clone());
        let mut acc = FSElement {
            numerator: Poly::zero(self.spec.weyl_ctx()),
            pole: 0,
        };
        for (m, c) in p.poly().terms() {
            let b: Vec<u16> = (0..n).map(|i| m.get(self.spec.d_index(i))).collect();
            let db = self.derive(&b, &mut memo);
            if db.is_zero() {
                continue;
            }
            let mut coef = m.clone();
            for i in 0..n {
                coef.set(self.spec.d_index(i), 0);
            }
            let t = FSElement {
                numerator: db.numerator.mul_mono(&coef, c),
                pole: db.pole,
            };
            acc = self.add(&acc, &t);
        }
        acc
    }

    fn derive(&self, b: &[u16], memo: &mut HashMap<Vec<u16>, FSElement>) -> FSElement {
        if let Some(e) = memo.get(b) {
            return e.clone();
        }
        let i = b.iter().position(|&e| e > 0).expect("nonzero multi-index");
        let mut prev = b.to_vec();
        prev[i] -= 1;
        let base = self.derive(&prev, memo);
        let r = self.partial(i, &base);
        memo.insert(b.to_vec(), r.clone());
        r
    }
}

/// `P • F^S`; `P` annihilates `F^S` exactly when the result is zero.
pub fn apply_to_fs(p: &WeylOp, spec: &FactorizationSpec) -> FSElement {
    let a = FSAction::new(spec);
    a.apply(p, &a.one())
}

/// `P • g` for a polynomial `g` in the Weyl context free of derivatives,
/// with central parameters acting as scalars.
pub fn act_on_poly(p: &WeylOp, g: &Poly) -> Poly {
    let ctx = p.ctx();
    let pairs = ctx.weyl_pairs();
    let mut memo: HashMap<Mono, Poly> = HashMap::new();
    let mut acc = Poly::zero(ctx);
    for (m, c) in p.poly().terms() {
        let mut b = Mono::one(ctx.nvars());
        let mut coef = m.clone();
        for &(_, d) in &pairs {
            b.set(d, m.get(d));
            coef.set(d, 0);
        }
        let dg = memo
            .entry(b.clone())
            .or_insert_with(|| {
                let mut q = g.clone();
                for &(x, d) in &pairs {
                    for _ in 0..b.get(d) {
                        q = q.derivative(x);
                    }
                }
                q
            })
            .clone();
        if !dg.is_zero() && !c.is_zero() {
            acc = &acc + &dg.mul_mono(&coef, c);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::parse_weyl;

    #[test]
    fn power_rule() {
        let spec = FactorizationSpec::parse(&["x"], &["x"]).unwrap();
        let w = |s: &str| parse_weyl(s, spec.weyl_ctx()).unwrap();
        assert!(apply_to_fs(&w("x*dx - s"), &spec).is_zero());
        let e = apply_to_fs(&w("dx"), &spec);
        assert_eq!(e.pole, 1);
        assert_eq!(e.numerator.to_string(), "s");
    }

    #[test]
    fn quasi_euler_annihilates() {
        let spec = FactorizationSpec::parse(&["x", "y", "z"], &["x", "2*x^2+y*z"]).unwrap();
        let w = |s: &str| parse_weyl(s, spec.weyl_ctx()).unwrap();
        let op = w("1/3*x*dx + 2/3*y*dy - 1/3*s1 - 2/3*s2");
        assert!(apply_to_fs(&op, &spec).is_zero());
        assert!(!apply_to_fs(&w("x*dx - s1"), &spec).is_zero());
    }

    #[test]
    fn polynomial_action() {
        let spec = FactorizationSpec::parse(&["x"], &["x"]).unwrap();
        let c = spec.weyl_ctx();
        let g = crate::ring::parse_poly("x^3", c).unwrap();
        let r = act_on_poly(&parse_weyl("x*dx^2", c).unwrap(), &g);
        assert_eq!(r, crate::ring::parse_poly("6*x^2", c).unwrap());
    }
}
