//! Central hyperplane arrangements: normals, essentiality and matroid
//! connectivity.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::logder::FactorizationSpec;
use crate::par::Exec;
use crate::ring::{Mono, Poly, Rat, VarContext};

/// Linear forms with multiplicities, grouped into factors.
#[derive(Clone, Debug)]
pub struct ArrangementSpec {
    pub forms: Vec<Poly>,
    pub multiplicities: Vec<u32>,
    /// Factor index of each form.
    pub groups: Vec<usize>,
}

impl ArrangementSpec {
    /// One form per factor, multiplicity one.
    pub fn simple(forms: Vec<Poly>) -> Result<Self> {
        let m = forms.len();
        Self::new(forms, vec![1; m], (0..m).collect())
    }

    pub fn new(forms: Vec<Poly>, multiplicities: Vec<u32>, groups: Vec<usize>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::InvalidInput("empty arrangement".into()));
        }
        if multiplicities.len() != forms.len() || groups.len() != forms.len() {
            return Err(Error::InvalidInput("forms, multiplicities and groups differ in length".into()));
        }
        if multiplicities.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        let ngroups = groups.iter().max().map_or(0, |g| g + 1);
        if (0..ngroups).any(|g| !groups.contains(&g)) {
            return Err(Error::InvalidInput("groups must be numbered 0..r without gaps".into()));
        }
        for l in &forms {
            let homogeneous_linear =
                !l.is_zero() && l.terms().iter().all(|(m, _)| m.degree() == 1);
            if !homogeneous_linear {
                return Err(Error::NotLinear(l.to_string()));
            }
        }
        let a = ArrangementSpec {
            forms,
            multiplicities,
            groups,
        };
        let nm = a.normals();
        for i in 0..nm.len() {
            for j in i + 1..nm.len() {
                if rank(&[nm[i].clone(), nm[j].clone()]) < 2 {
                    return Err(Error::InvalidInput(format!(
                        "forms {} and {} are proportional",
                        a.forms[i], a.forms[j]
                    )));
                }
            }
        }
        Ok(a)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        self.forms[0].ctx()
    }

    /// Row `i` holds the coefficients of `ℓ_i`.
    pub fn normals(&self) -> Vec<Vec<Rat>> {
        let n = self.ctx().nvars();
        self.forms
            .iter()
            .map(|l| (0..n).map(|j| l.coeff(&Mono::var(n, j, 1))).collect())
            .collect()
    }

    /// `f_k = ∏_{group(i) = k} ℓ_i^{e_i}`.
    pub fn factors(&self) -> Vec<Poly> {
        let r = self.groups.iter().max().map_or(0, |g| g + 1);
        let mut out = vec![Poly::one(self.ctx()); r];
        for ((l, &e), &g) in self.forms.iter().zip(&self.multiplicities).zip(&self.groups) {
            out[g] = &out[g] * &l.pow(e);
        }
        out
    }

    pub fn factorization(&self) -> Result<FactorizationSpec> {
        FactorizationSpec::new(self.ctx(), self.factors())
    }

    /// Whether the arrangement multiplies out to the factors of `spec`
    /// (factor by factor, up to nonzero constants).
    pub fn matches(&self, spec: &FactorizationSpec) -> bool {
        let mine = self.factors();
        mine.len() == spec.r()
            && mine.iter().zip(spec.factors()).all(|(a, b)| {
                a.div_exact(b)
                    .is_some_and(|q| q.is_constant() && !q.is_zero())
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrangementReport {
    pub central: bool,
    pub essential: bool,
    pub rank: usize,
    pub indecomposable: bool,
    /// Connected components of the matroid, as form indices.
    pub components: Vec<Vec<usize>>,
    pub tame_shortcut: bool,
    pub saito_holonomic: bool,
}

/// Connected components of the linear matroid on the rows of `normals`,
/// from the fundamental circuits of a greedy basis.
pub fn matroid_components(normals: &[Vec<Rat>], exec: Exec) -> Vec<Vec<usize>> {
    let m = normals.len();
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..m {
        let mut rows: Vec<Vec<Rat>> = basis.iter().map(|&b| normals[b].clone()).collect();
        rows.push(normals[i].clone());
        if rank(&rows) == rows.len() {
            basis.push(i);
        }
    }
    let outside: Vec<usize> = (0..m).filter(|i| !basis.contains(i)).collect();
    // C(e, B) = {e} ∪ {b : B - b + e independent}
    let circuits: Vec<Vec<usize>> = exec.map(&outside, |&e| {
        let mut c = vec![e];
        for (k, &b) in basis.iter().enumerate() {
            let mut rows: Vec<Vec<Rat>> = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &x)| normals[x].clone())
                .collect();
            rows.push(normals[e].clone());
            if rank(&rows) == rows.len() {
                c.push(b);
            }
        }
        c
    });
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for c in &circuits {
        for w in c.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(c) => comps[c].push(i),
            None => {
                root_of[r] = Some(comps.len());
                comps.push(vec![i]);
            }
        }
    }
    comps
}

pub fn arrangement_analyze(a: &ArrangementSpec) -> ArrangementReport {
    let normals = a.normals();
    let n = a.ctx().nvars();
    let rk = rank(&normals);
    let components = matroid_components(&normals, Exec::default());
    let zero_const = a.forms.iter().all(|l| l.constant_term().is_zero());
    ArrangementReport {
        central: zero_const,
        essential: rk == n,
        rank: rk,
        indecomposable: components.len() == 1,
        components,
        tame_shortcut: rk <= 3,
        saito_holonomic: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_poly;

    fn arr(vars: &[&str], forms: &[&str]) -> ArrangementSpec {
        let c = VarContext::plain(vars).unwrap();
        ArrangementSpec::simple(forms.iter().map(|f| parse_poly(f, &c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn three_lines() {
        let r = arrangement_analyze(&arr(&["x", "y"], &["x", "y", "x+y"]));
        assert!(r.central && r.essential && r.indecomposable && r.tame_shortcut);
    }

    #[test]
    fn two_lines_split() {
        let r = arrangement_analyze(&arr(&["x", "y"], &["x", "y"]));
        assert!(r.essential);
        assert!(!r.indecomposable);
        assert_eq!(r.components, vec![vec![0], vec![1]]);
    }

    #[test]
    fn generic_four_planes() {
        let r = arrangement_analyze(&arr(&["x", "y", "z"], &["x", "y", "z", "x+y+z"]));
        assert!(r.essential && r.indecomposable && r.tame_shortcut);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn product_arrangement_splits() {
        // xy(x+y) times zw(z+w)
        let r = arrangement_analyze(&arr(
            &["x", "y", "z", "w"],
            &["x", "y", "x+y", "z", "w", "z+w"],
        ));
        assert!(!r.indecomposable);
        assert_eq!(r.components.len(), 2);
        assert!(!r.tame_shortcut);
    }

    #[test]
    fn rejects_bad_forms() {
        let c = VarContext::plain(&["x", "y"]).unwrap();
        let p = |s: &str| parse_poly(s, &c).unwrap();
        assert!(matches!(
            ArrangementSpec::simple(vec![p("x+1")]),
            Err(Error::NotLinear(_))
        ));
        assert!(matches!(
            ArrangementSpec::simple(vec![p("x*y")]),
            Err(Error::NotLinear(_))
        ));
        assert!(ArrangementSpec::simple(vec![p("x"), p("2*x")]).is_err());
    }

    #[test]
    fn grouping_multiplies_out() {
        let c = VarContext::plain(&["x", "y"]).unwrap();
        let p = |s: &str| parse_poly(s, &c).unwrap();
        let a = ArrangementSpec::new(vec![p("x"), p("y"), p("x+y")], vec![1, 1, 1], vec![0, 1, 1]).unwrap();
        let spec = FactorizationSpec::parse(&["x", "y"], &["x", "y*(x+y)"]).unwrap();
        assert!(a.matches(&spec));
        assert_eq!(a.factors()[1], p("x*y+y^2"));
    }
}
