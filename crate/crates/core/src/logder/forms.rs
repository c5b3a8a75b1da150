use serde::Serialize;

use super::Verdict;
use crate::error::Result;
use crate::gb::{find_positive_grading, graded_free_resolution, syzygies, GradedModulePresentation, Limits};
use crate::ring::Poly;

/// k-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// `dx_j ∧ e_I = sign · e_J`, or `None` when `j ∈ I`.
pub(crate) fn wedge_left(j: usize, set: &[usize]) -> Option<(i32, Vec<usize>)> {
    if set.contains(&j) {
        return None;
    }
    let before = set.iter().filter(|&&i| i < j).count();
    let mut out = set.to_vec();
    out.insert(before, j);
    Some((if before % 2 == 0 { 1 } else { -1 }, out))
}

/// `pdim Ω^k(log f)` for quasi-homogeneous `f`, via
/// `f·Ω^k(log f) = {η ∈ Ω^k : df ∧ η ∈ f Ω^{k+1}}`.
pub fn log_forms_pdim(f: &Poly, k: usize, limits: Limits) -> Result<Option<i64>> {
    let ctx = f.ctx();
    let n = ctx.nvars();
    let Some(w) = find_positive_grading(std::slice::from_ref(f)) else {
        return Ok(None);
    };
    let src = subsets(n, k);
    let dst = subsets(n, k + 1);
    let idx = |s: &Vec<usize>| dst.iter().position(|d| d == s).expect("subset");
    let grad: Vec<Poly> = (0..n).map(|i| f.derivative(i)).collect();
    // columns: df ∧ e_I for each I, then -f e_J for each J
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    for set in &src {
        let mut v = vec![Poly::zero(ctx); dst.len()];
        for j in 0..n {
            if let Some((sign, t)) = wedge_left(j, set) {
                let term = if sign > 0 { grad[j].clone() } else { -&grad[j] };
                let pos = idx(&t);
                v[pos] = &v[pos] + &term;
            }
        }
        cols.push(v);
    }
    for j in 0..dst.len() {
        let mut v = vec![Poly::zero(ctx); dst.len()];
        v[j] = -f;
        cols.push(v);
    }
    let gens: Vec<Vec<Poly>> = if dst.is_empty() {
        // k = n: every n-form qualifies
        (0..src.len())
            .map(|i| {
                let mut v = vec![Poly::zero(ctx); src.len()];
                v[i] = Poly::one(ctx);
                v
            })
            .collect()
    } else {
        syzygies(ctx, &cols, limits)?
            .into_iter()
            .map(|s| s[..src.len()].to_vec())
            .collect()
    };
    let col_degrees: Vec<i64> = src
        .iter()
        .map(|s| s.iter().map(|&i| w[i] as i64).sum())
        .collect();
    let pres = GradedModulePresentation {
        ctx: ctx.clone(),
        weights: w,
        col_degrees,
        generators: gens,
    };
    Ok(Some(graded_free_resolution(&pres, limits)?.pdim()))
}

#[derive(Clone, Debug, Serialize)]
pub struct TamenessReport {
    pub verdict: Verdict,
    /// `(k, pdim Ω^k(log f))`, empty when the dimension shortcut applies.
    pub table: Vec<(usize, i64)>,
    pub reason: String,
}

/// Tame: `pdim Ω^k(log f) ≤ k` for every `k`. Automatic in at most three variables.
pub fn tameness_check(f: &Poly, limits: Limits) -> Result<TamenessReport> {
    let n = f.ctx().nvars();
    if n <= 3 {
        return Ok(TamenessReport {
            verdict: Verdict::Yes,
            table: Vec::new(),
            reason: format!("n = {n} <= 3"),
        });
    }
    let mut table = Vec::new();
    let mut verdict = Verdict::Yes;
    for k in 0..=n {
        match log_forms_pdim(f, k, limits)? {
            Some(p) => {
                table.push((k, p));
                if p > k as i64 {
                    verdict = Verdict::No;
                }
            }
            None => {
                return Ok(TamenessReport {
                    verdict: Verdict::Unknown,
                    table,
                    reason: "no positive grading for the resolution".into(),
                })
            }
        }
    }
    Ok(TamenessReport {
        verdict,
        table,
        reason: "graded resolutions of the logarithmic forms".into(),
    })
}
