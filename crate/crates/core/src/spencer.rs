//! The Spencer co-complex of `θ_F` for free divisors, with `E = 𝒪`.
//!
//! Free modules are rows over `D[S]`; the differential `d^{-k}` is the matrix
//! `M_k` (rows: k-subsets, columns: (k-1)-subsets) acting by right
//! multiplication, so `d^{-(k-1)} ∘ d^{-k} = 0` reads `M_k · M_{k-1} = 0`.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gb::Limits;
use crate::gb::IdealHandle;
use crate::logder::{
    is_regular_sequence, koszul_free_check, psi_f, saito_basis, theta_f, FactorizationSpec,
    LogDerivation,
};
use crate::par::Exec;
use crate::ring::{determinant, Poly, Rat};
use crate::weyl::{gr_symbol, transpose_tau, Filtration, WeylIdeal, WeylOp};

/// Operator matrix.
pub type OpMatrix = Vec<Vec<WeylOp>>;

#[derive(Clone, Debug)]
pub struct SpencerComplex {
    pub spec: FactorizationSpec,
    pub basis: Vec<LogDerivation>,
    /// `λ_i = ψ_F(δ_i)`.
    pub lambdas: Vec<WeylOp>,
    /// `structure[i][j][k] = c^k_{ij}` with `[δ_i, δ_j] = Σ_k c^k_{ij} δ_k`,
    /// as `x`-polynomials in the Weyl context.
    pub structure: Vec<Vec<Vec<Poly>>>,
    /// `subsets[k]`: sorted k-subsets indexing the free module in degree `-k`.
    pub subsets: Vec<Vec<Vec<usize>>>,
    /// `differentials[k - 1] = M_k` for `k = 1..n`.
    pub differentials: Vec<OpMatrix>,
}

fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(p) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return out;
        };
        idx[p] += 1;
        for j in p + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Sorts `seq`, returning the sign of the permutation, or `None` on repeats.
fn sort_sign(seq: &[usize]) -> Option<(i32, Vec<usize>)> {
    let mut v = seq.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

/// `[δ_i, δ_j]` as a coefficient vector.
fn bracket_fields(a: &LogDerivation, b: &LogDerivation) -> Vec<Poly> {
    let n = a.coeffs.len();
    (0..n)
        .map(|k| &a.apply(&b.coeffs[k]) - &b.apply(&a.coeffs[k]))
        .collect()
}

/// `c` with `v = Σ_k c_k δ_k`, by `c = v · adj(A) / det(A)`.
fn coordinates(v: &[Poly], basis: &[LogDerivation]) -> Result<Vec<Poly>> {
    let ctx = v[0].ctx().clone();
    let n = basis.len();
    let a: Vec<Vec<Poly>> = basis.iter().map(|d| d.coeffs.clone()).collect();
    let det = determinant(&a, &ctx);
    if det.is_zero() {
        return Err(Error::NotFree);
    }
    let minor = |r: usize, c: usize| -> Poly {
        let m: Vec<Vec<Poly>> = (0..n)
            .filter(|&i| i != r)
            .map(|i| (0..n).filter(|&j| j != c).map(|j| a[i][j].clone()).collect())
            .collect();
        determinant(&m, &ctx)
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // adj(A)[j][k] = (-1)^{j+k} det(minor(k, j))
        let mut num = Poly::zero(&ctx);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            let cof = minor(k, j);
            let term = vj * &cof;
            num = if (j + k) % 2 == 0 { &num + &term } else { &num - &term };
        }
        out.push(num.div_exact(&det).ok_or(Error::StructureConstantFailure)?);
    }
    Ok(out)
}

impl SpencerComplex {
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    /// `d(e_{seq})` for an arbitrary index sequence, as sorted subsets with
    /// operator coefficients.
    pub fn d_of_wedge(&self, seq: &[usize]) -> BTreeMap<Vec<usize>, WeylOp> {
        let ctx = self.spec.weyl_ctx();
        let mut out: BTreeMap<Vec<usize>, WeylOp> = BTreeMap::new();
        let add = |set: Vec<usize>, op: WeylOp, out: &mut BTreeMap<Vec<usize>, WeylOp>| {
            if let Some((sign, sorted)) = sort_sign(&set) {
                let op = if sign < 0 { -&op } else { op };
                let e = out.entry(sorted).or_insert_with(|| WeylOp::zero(ctx));
                *e = &*e + &op;
            }
        };
        let k = seq.len();
        for i in 0..k {
            let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
            let rest: Vec<usize> = seq.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect();
            add(rest, self.lambdas[seq[i]].scale(&sign), &mut out);
        }
        for i in 0..k {
            for j in i + 1..k {
                // (-1)^{(i+1)+(j+1)} in one-based positions
                let sign = if (i + j) % 2 == 0 { Rat::one() } else { -Rat::one() };
                let rest: Vec<usize> = seq
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != i && p != j)
                    .map(|(_, &x)| x)
                    .collect();
                for (c, coef) in self.structure[seq[i]][seq[j]].iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let mut set = vec![c];
                    set.extend(&rest);
                    add(set, WeylOp::from_poly(coef.scale(&sign)), &mut out);
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// Builds the complex from a verified Saito basis.
pub fn spencer_complex(spec: &FactorizationSpec, limits: Limits) -> Result<SpencerComplex> {
    let basis = saito_basis(spec.f(), limits)?.ok_or(Error::NotFree)?;
    if !koszul_free_check(&basis, limits)? {
        return Err(Error::NotKoszulFree);
    }
    let n = basis.len();
    let lambdas: Vec<WeylOp> = basis.iter().map(|d| psi_f(d, spec)).collect::<Result<_>>()?;
    let mut structure = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = bracket_fields(&basis[i], &basis[j]);
            let c = coordinates(&v, &basis)?;
            structure[i][j] = c.iter().map(|p| spec.to_weyl(p)).collect();
        }
    }
    // ψ_F respects brackets: [λ_i, λ_j] = Σ c^k_{ij} λ_k
    for i in 0..n {
        for j in i + 1..n {
            let lhs = lambdas[i].bracket(&lambdas[j]);
            let rhs = structure[i][j]
                .iter()
                .zip(&lambdas)
                .fold(WeylOp::zero(spec.weyl_ctx()), |acc, (c, l)| {
                    &acc + &(&WeylOp::from_poly(c.clone()) * l)
                });
            if lhs != rhs {
                return Err(Error::StructureConstantFailure);
            }
        }
    }
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| all_subsets(n, k)).collect();
    let mut cx = SpencerComplex {
        spec: spec.clone(),
        basis,
        lambdas,
        structure,
        subsets,
        differentials: Vec::new(),
    };
    for k in 1..=n {
        let rows = &cx.subsets[k];
        let cols = &cx.subsets[k - 1];
        let mut m = vec![vec![WeylOp::zero(spec.weyl_ctx()); cols.len()]; rows.len()];
        for (r, set) in rows.iter().enumerate() {
            for (target, op) in cx.d_of_wedge(set) {
                let c = cols.iter().position(|s| *s == target).expect("subset of size k-1");
                m[r][c] = op;
            }
        }
        cx.differentials.push(m);
    }
    Ok(cx)
}

/// `A · B` over the Weyl algebra, rows in parallel.
pub fn mat_mul(a: &OpMatrix, b: &OpMatrix, exec: Exec) -> OpMatrix {
    let cols = b.first().map_or(0, |r| r.len());
    exec.map(a, |row| {
        (0..cols)
            .map(|c| {
                row.iter()
                    .zip(b)
                    .filter(|(x, _)| !x.is_zero())
                    .fold(None::<WeylOp>, |acc, (x, brow)| {
                        let t = x * &brow[c];
                        Some(match acc {
                            Some(s) => &s + &t,
                            None => t,
                        })
                    })
                    .unwrap_or_else(|| WeylOp::zero(row[0].ctx()))
            })
            .collect()
    })
}

fn is_zero_matrix(m: &OpMatrix) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub d2_zero: bool,
    pub terminal_image_eq_theta_f: bool,
    pub gr_exactness_certificate: bool,
    pub tau_reversed_chain: bool,
}

impl ChainReport {
    pub fn all(&self) -> bool {
        self.d2_zero && self.terminal_image_eq_theta_f && self.gr_exactness_certificate && self.tau_reversed_chain
    }
}

/// `τ` entrywise, then transpose.
pub fn tau_transpose(m: &OpMatrix) -> OpMatrix {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|c| (0..rows).map(|r| transpose_tau(&m[r][c])).collect())
        .collect()
}

pub fn verify_chain_conditions(cx: &SpencerComplex, limits: Limits) -> Result<ChainReport> {
    let exec = Exec::default();
    let d = &cx.differentials;
    let d2_zero = d
        .windows(2)
        .all(|w| is_zero_matrix(&mat_mul(&w[1], &w[0], exec)));
    let tau_reversed_chain = d.windows(2).all(|w| {
        is_zero_matrix(&mat_mul(&tau_transpose(&w[0]), &tau_transpose(&w[1]), exec))
    });
    let ctx = cx.spec.weyl_ctx();
    let image: Vec<WeylOp> = d.first().map_or(Vec::new(), |m| m.iter().map(|r| r[0].clone()).collect());
    let a = WeylIdeal::grevlex(ctx, image).with_limits(limits);
    let b = WeylIdeal::grevlex(ctx, theta_f(&cx.spec, limits)?).with_limits(limits);
    let terminal_image_eq_theta_f = a.equals(&b)?;
    let sym = cx.spec.sym_ctx();
    let symbols: Vec<Poly> = cx
        .lambdas
        .iter()
        .map(|l| gr_symbol(l, Filtration::TotalOrder, sym))
        .collect::<Result<_>>()?;
    let gr_exactness_certificate =
        is_regular_sequence(sym, &IdealHandle::grevlex(sym, vec![]), &symbols, limits)?;
    Ok(ChainReport {
        d2_zero,
        terminal_image_eq_theta_f,
        gr_exactness_certificate,
        tau_reversed_chain,
    })
}

/// `shift(M_k) · f = f · M_k` entrywise for every `k`.
pub fn dual_lift_check(cx: &SpencerComplex) -> bool {
    let f = cx.spec.to_weyl_op(cx.spec.f());
    let exec = Exec::default();
    cx.differentials.iter().all(|m| {
        exec.map(m, |row| row.iter().all(|e| &e.shift_s() * &f == &f * e))
            .into_iter()
            .all(|b| b)
    })
}

impl SpencerComplex {
    /// Differentials as text, row by row.
    pub fn render(&self) -> Vec<Vec<Vec<String>>> {
        self.differentials
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(vars: &[&str], fs: &[&str]) -> Result<SpencerComplex> {
        let spec = FactorizationSpec::parse(vars, fs).unwrap();
        spencer_complex(&spec, Limits::default())
    }

    #[test]
    fn coordinate_cross() {
        let cx = build(&["x", "y"], &["x", "y"]).unwrap();
        let mut d1: Vec<String> = cx.differentials[0].iter().map(|r| r[0].to_string()).collect();
        d1.sort();
        assert_eq!(d1, vec!["x*dx - s1", "y*dy - s2"]);
        assert!(cx.structure[0][1].iter().all(|c| c.is_zero()));
        let r = verify_chain_conditions(&cx, Limits::default()).unwrap();
        assert!(r.all(), "{r:?}");
        assert!(dual_lift_check(&cx));
    }

    #[test]
    fn three_lines() {
        let cx = build(&["x", "y"], &["x*y*(x+y)"]).unwrap();
        // one basis element is the Euler field, the other has degree-2 coefficients
        let (e, d) = if cx.basis[0].coeffs[0].total_degree() == 1 { (0, 1) } else { (1, 0) };
        let c = &cx.structure[e][d];
        assert!(c[e].is_zero());
        assert!(c[d].is_constant() && !c[d].is_zero());
        let r = verify_chain_conditions(&cx, Limits::default()).unwrap();
        assert!(r.all(), "{r:?}");
        assert!(dual_lift_check(&cx));
    }

    #[test]
    fn normal_crossings_three() {
        let cx = build(&["a", "b", "c"], &["a", "b", "c"]).unwrap();
        assert_eq!(cx.differentials.len(), 3);
        let r = verify_chain_conditions(&cx, Limits::default()).unwrap();
        assert!(r.all(), "{r:?}");
        assert!(dual_lift_check(&cx));
    }

    #[test]
    fn worked_example_is_not_free() {
        assert!(matches!(build(&["x", "y", "z"], &["x", "2*x^2+y*z"]), Err(Error::NotFree)));
    }

    #[test]
    fn alternating() {
        let cx = build(&["a", "b", "c"], &["a*b*c"]).unwrap();
        let a = cx.d_of_wedge(&[0, 2, 1]);
        let b = cx.d_of_wedge(&[0, 1, 2]);
        for (k, v) in &b {
            assert_eq!(&-v, a.get(k).unwrap());
        }
        assert!(cx.d_of_wedge(&[1, 1]).is_empty());
    }
}
