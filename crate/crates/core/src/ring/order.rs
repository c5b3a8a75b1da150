//! Monomial orders, compiled to integer matrix orders.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::mono::Mono;
use crate::error::{Error, Result};

/// Description of a monomial order over a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    Grevlex,
    /// Compare by the weight vector first, then by the tie-break order.
    Weighted {
        weights: Vec<u32>,
        tie: Box<OrderKind>,
    },
    /// Lexicographic on blocks; each block compared by its own order.
    /// Variables not listed in any block are compared last by grevlex.
    Block { blocks: Vec<(Vec<usize>, OrderKind)> },
    /// Raw matrix order. Rows are compared in sequence.
    Matrix(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Row {
    Weight(Vec<(usize, i64)>),
    Unit(usize, i64),
}

impl Row {
    #[inline]
    fn eval(&self, m: &Mono) -> i64 {
        match self {
            Row::Weight(w) => w.iter().map(|&(i, c)| c * m.get(i) as i64).sum(),
            Row::Unit(i, c) => c * m.get(*i) as i64,
        }
    }
}

/// A global, multiplicative total order on monomials in `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    nvars: usize,
    rows: Arc<[Row]>,
}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)
    }
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Result<Self> {
        let all: Vec<usize> = (0..nvars).collect();
        let rows = compile(&kind, &all, nvars)?;
        Ok(MonomialOrder {
            kind,
            nvars,
            rows: rows.into(),
        })
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grevlex, nvars).expect("grevlex is always valid")
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars).expect("lex is always valid")
    }

    /// Weight vector refined by grevlex.
    pub fn weighted(weights: &[u32]) -> Self {
        Self::new(
            OrderKind::Weighted {
                weights: weights.to_vec(),
                tie: Box::new(OrderKind::Grevlex),
            },
            weights.len(),
        )
        .expect("weight-refined grevlex is always valid")
    }

    /// Elimination order: `drop` variables dominate, both parts grevlex
    /// (optionally weighted inside each part).
    pub fn elimination(nvars: usize, drop: &[usize], weights: Option<&[u32]>) -> Self {
        let rest: Vec<usize> = (0..nvars).filter(|i| !drop.contains(i)).collect();
        let inner = |vars: &[usize]| match weights {
            Some(w) => OrderKind::Weighted {
                weights: vars.iter().map(|&i| w[i]).collect(),
                tie: Box::new(OrderKind::Grevlex),
            },
            None => OrderKind::Grevlex,
        };
        Self::new(
            OrderKind::Block {
                blocks: vec![(drop.to_vec(), inner(drop)), (rest.clone(), inner(&rest))],
            },
            nvars,
        )
        .expect("elimination order is valid")
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        for r in self.rows.iter() {
            match r.eval(a).cmp(&r.eval(b)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Short human name used in reports and CLI flags.
    pub fn name(&self) -> String {
        fn go(k: &OrderKind) -> String {
            match k {
                OrderKind::Lex => "lex".into(),
                OrderKind::Grevlex => "grevlex".into(),
                OrderKind::Weighted { weights, tie } => format!("weight{weights:?}+{}", go(tie)),
                OrderKind::Block { blocks } => {
                    let parts: Vec<String> =
                        blocks.iter().map(|(v, k)| format!("{v:?}:{}", go(k))).collect();
                    format!("block[{}]", parts.join(","))
                }
                OrderKind::Matrix(_) => "matrix".into(),
            }
        }
        go(&self.kind)
    }
}

/// Rows of `kind` acting on the variables `vars` (positions in the full vector).
fn compile(kind: &OrderKind, vars: &[usize], nvars: usize) -> Result<Vec<Row>> {
    Ok(match kind {
        OrderKind::Lex => vars.iter().map(|&i| Row::Unit(i, 1)).collect(),
        OrderKind::Grevlex => {
            let mut rows = vec![Row::Weight(vars.iter().map(|&i| (i, 1)).collect())];
            rows.extend(vars.iter().rev().map(|&i| Row::Unit(i, -1)));
            rows
        }
        OrderKind::Weighted { weights, tie } => {
            if weights.len() != vars.len() {
                return Err(Error::InvalidInput("weight vector arity mismatch".into()));
            }
            let mut rows = vec![Row::Weight(
                vars.iter()
                    .zip(weights)
                    .filter(|(_, &w)| w != 0)
                    .map(|(&i, &w)| (i, w as i64))
                    .collect(),
            )];
            rows.extend(compile(tie, vars, nvars)?);
            rows
        }
        OrderKind::Block { blocks } => {
            let mut seen = vec![false; nvars];
            let mut rows = Vec::new();
            for (bvars, inner) in blocks {
                let mapped: Vec<usize> = bvars
                    .iter()
                    .map(|&j| {
                        vars.get(j)
                            .copied()
                            .ok_or_else(|| Error::InvalidInput("block index out of range".into()))
                    })
                    .collect::<Result<_>>()?;
                for &v in &mapped {
                    if seen[v] {
                        return Err(Error::InvalidInput("variable in two blocks".into()));
                    }
                    seen[v] = true;
                }
                rows.extend(compile(inner, &mapped, nvars)?);
            }
            let rest: Vec<usize> = vars.iter().copied().filter(|&v| !seen[v]).collect();
            if !rest.is_empty() {
                rows.extend(compile(&OrderKind::Grevlex, &rest, nvars)?);
            }
            rows
        }
        OrderKind::Matrix(m) => {
            // A well-order needs the first nonzero entry of every column positive.
            for (j, _) in vars.iter().enumerate() {
                match m.iter().map(|r| r.get(j).copied().unwrap_or(0)).find(|&c| c != 0) {
                    Some(c) if c > 0 => {}
                    _ => {
                        return Err(Error::InvalidInput(
                            "matrix order is not a global well-order".into(),
                        ))
                    }
                }
            }
            m.iter()
                .map(|r| Row::Weight(vars.iter().zip(r).map(|(&i, &c)| (i, c)).collect()))
                .collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u16]) -> Mono {
        Mono::from_slice(e)
    }

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::grevlex(3);
        // x*z vs y^2: same degree, smaller last exponent wins
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 0, 2])), Ordering::Less);
    }

    #[test]
    fn elimination_order_dominates() {
        let o = MonomialOrder::elimination(3, &[0], None);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
    }

    #[test]
    fn weighted_tie_breaks_by_grevlex() {
        let o = MonomialOrder::weighted(&[0, 1, 0]);
        assert_eq!(o.cmp(&m(&[0, 1, 0]), &m(&[5, 0, 5])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    fn arb_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::grevlex(3)),
            Just(MonomialOrder::lex(3)),
            Just(MonomialOrder::weighted(&[0, 2, 1])),
            Just(MonomialOrder::elimination(3, &[1], None)),
        ]
    }

    fn arb_mono() -> impl Strategy<Value = Mono> {
        proptest::collection::vec(0u16..5, 3).prop_map(|v| Mono::from_slice(&v))
    }

    proptest! {
        #[test]
        fn multiplicative_and_total(o in arb_order(), a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            let ab = o.cmp(&a, &b);
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            prop_assert_eq!(o.cmp(&a.mul(&c), &b.mul(&c)), ab);
            if !c.is_one() {
                prop_assert_eq!(o.cmp(&a.mul(&c), &a), Ordering::Greater);
            }
        }
    }
}
