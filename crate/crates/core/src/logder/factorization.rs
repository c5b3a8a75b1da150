use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{parse_poly, BlockKind, Poly, VarContext};
use crate::weyl::{symbol_context, weyl_context, WeylOp};

/// A factorization `F = (f_1, …, f_r)` of `f` in `n` variables, with the
/// variable contexts shared by every computation on it.
///
/// Layout: the Weyl context is `x_1..x_n, dx_1..dx_n, s_1..s_r`; the symbol
/// context relabels `dx_i` as `y_x_i`. Parameters are named `s` when `r = 1`.
#[derive(Clone, Debug)]
pub struct FactorizationSpec {
    xctx: Arc<VarContext>,
    weyl: Arc<VarContext>,
    sym: Arc<VarContext>,
    factors: Vec<Poly>,
    f: Poly,
}

impl FactorizationSpec {
    pub fn parse<S: AsRef<str>>(vars: &[S], factors: &[S]) -> Result<Self> {
        let xctx = VarContext::plain(vars)?;
        let polys = factors
            .iter()
            .map(|t| parse_poly(t.as_ref(), &xctx))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&xctx, polys)
    }

    pub fn new(xctx: &Arc<VarContext>, factors: Vec<Poly>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("no factors".into()));
        }
        for (k, p) in factors.iter().enumerate() {
            if p.is_constant() {
                return Err(Error::InvalidInput(format!("factor {} is constant", k + 1)));
            }
        }
        let r = factors.len();
        let params: Vec<String> = if r == 1 {
            vec!["s".into()]
        } else {
            (1..=r).map(|k| format!("s{k}")).collect()
        };
        let weyl = weyl_context(xctx.names(), &params)?;
        let sym = symbol_context(&weyl)?;
        let f = factors
            .iter()
            .fold(Poly::one(xctx), |acc, p| &acc * p);
        Ok(FactorizationSpec {
            xctx: xctx.clone(),
            weyl,
            sym,
            factors,
            f,
        })
    }

    pub fn n(&self) -> usize {
        self.xctx.nvars()
    }

    pub fn r(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.factors.iter().map(|p| p.total_degree()).collect()
    }

    pub fn xctx(&self) -> &Arc<VarContext> {
        &self.xctx
    }

    pub fn weyl_ctx(&self) -> &Arc<VarContext> {
        &self.weyl
    }

    pub fn sym_ctx(&self) -> &Arc<VarContext> {
        &self.sym
    }

    pub fn x_index(&self, i: usize) -> usize {
        i
    }

    pub fn d_index(&self, i: usize) -> usize {
        self.n() + i
    }

    pub fn s_index(&self, k: usize) -> usize {
        2 * self.n() + k
    }

    pub fn s_indices(&self) -> Vec<usize> {
        self.weyl.vars_of_kind(BlockKind::S)
    }

    /// An `x`-polynomial in the Weyl context.
    pub fn to_weyl(&self, p: &Poly) -> Poly {
        let map: Vec<usize> = (0..p.ctx().nvars()).collect();
        p.remap(&self.weyl, &map)
    }

    pub fn to_weyl_op(&self, p: &Poly) -> WeylOp {
        WeylOp::from_poly(self.to_weyl(p))
    }

    /// An `x`-polynomial in the symbol context.
    pub fn to_sym(&self, p: &Poly) -> Poly {
        let map: Vec<usize> = (0..p.ctx().nvars()).collect();
        p.remap(&self.sym, &map)
    }

    pub fn s_var(&self, k: usize) -> Poly {
        Poly::var(&self.weyl, self.s_index(k))
    }

    pub fn d_var(&self, i: usize) -> WeylOp {
        WeylOp::var(&self.weyl, self.d_index(i))
    }

    /// `(f_1, …, f_{r-2}, f_{r-1} f_r)`.
    pub fn coarsen_last_two(&self) -> Result<Self> {
        if self.r() < 2 {
            return Err(Error::InvalidInput("need at least two factors".into()));
        }
        let mut fs = self.factors[..self.r() - 2].to_vec();
        fs.push(&self.factors[self.r() - 2] * &self.factors[self.r() - 1]);
        Self::new(&self.xctx, fs)
    }

    /// The one-factor specification `(f)`.
    pub fn product(&self) -> Result<Self> {
        Self::new(&self.xctx, vec![self.f.clone()])
    }

    pub fn describe(&self) -> String {
        let fs: Vec<String> = self.factors.iter().map(|p| format!("({p})")).collect();
        format!("F = {} in {}", fs.join(", "), self.xctx.names().join(","))
    }
}
