use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Role of a variable block. Gradings and the Weyl pairing are derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BlockKind {
    /// Space coordinates.
    X,
    /// Partial derivatives, paired position-wise with the `X` block.
    DX,
    /// Commutative symbols of the derivatives.
    Y,
    /// Central parameters.
    S,
    /// Homogenizing / auxiliary variable.
    T,
    /// Anything else (elimination helpers, coefficient rings).
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Block {
    pub fn vars(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

pub const GRADING_ORDER: &str = "(0,1)";
pub const GRADING_TOTAL_ORDER: &str = "(0,1,1)";
pub const GRADING_Y_ONLY: &str = "(0,1,0)";
pub const GRADING_STANDARD: &str = "standard";

/// Ordered, named variable blocks plus registered integer gradings.
#[derive(Clone, PartialEq, Eq)]
pub struct VarContext {
    names: Vec<String>,
    blocks: Vec<Block>,
    gradings: BTreeMap<String, Vec<u32>>,
}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarContext{:?}", self.names)
    }
}

impl VarContext {
    /// Builds a context from `(kind, block name, variable names)` triples.
    pub fn new<S: AsRef<str>>(blocks: &[(BlockKind, &str, Vec<S>)]) -> Result<Arc<Self>> {
        let mut names: Vec<String> = Vec::new();
        let mut out = Vec::new();
        for (kind, bname, vars) in blocks {
            let start = names.len();
            for v in vars {
                let v = v.as_ref();
                if !is_identifier(v) {
                    return Err(Error::InvalidInput(format!("bad variable name `{v}`")));
                }
                if names.iter().any(|n| n == v) {
                    return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
                }
                names.push(v.to_string());
            }
            out.push(Block {
                kind: *kind,
                name: bname.to_string(),
                start,
                len: vars.len(),
            });
        }
        let xs: Vec<_> = out.iter().filter(|b| b.kind == BlockKind::X).collect();
        let ds: Vec<_> = out.iter().filter(|b| b.kind == BlockKind::DX).collect();
        if !ds.is_empty() && (xs.len() != 1 || ds.len() != 1 || xs[0].len != ds[0].len) {
            return Err(Error::InvalidInput(
                "a derivative block needs exactly one matching X block".into(),
            ));
        }
        let mut ctx = VarContext {
            names,
            blocks: out,
            gradings: BTreeMap::new(),
        };
        let weight = |ctx: &VarContext, f: &dyn Fn(BlockKind) -> u32| -> Vec<u32> {
            let mut w = vec![0; ctx.nvars()];
            for b in &ctx.blocks {
                for i in b.vars() {
                    w[i] = f(b.kind);
                }
            }
            w
        };
        let g01 = weight(&ctx, &|k| matches!(k, BlockKind::DX | BlockKind::Y) as u32);
        let g011 = weight(&ctx, &|k| {
            matches!(k, BlockKind::DX | BlockKind::Y | BlockKind::S) as u32
        });
        let std = vec![1; ctx.nvars()];
        ctx.gradings.insert(GRADING_ORDER.into(), g01.clone());
        ctx.gradings.insert(GRADING_TOTAL_ORDER.into(), g011);
        ctx.gradings.insert(GRADING_Y_ONLY.into(), g01);
        ctx.gradings.insert(GRADING_STANDARD.into(), std);
        Ok(Arc::new(ctx))
    }

    /// Single anonymous block of plain variables.
    pub fn plain<S: AsRef<str>>(vars: &[S]) -> Result<Arc<Self>> {
        Self::new(&[(BlockKind::Other, "vars", vars.iter().map(|v| v.as_ref()).collect::<Vec<&str>>())])
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    pub fn block_of_kind(&self, kind: BlockKind) -> Option<&Block> {
        self.blocks.iter().find(|b| b.kind == kind)
    }

    pub fn vars_of_kind(&self, kind: BlockKind) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|b| b.kind == kind)
            .flat_map(|b| b.vars())
            .collect()
    }

    /// `(x index, d index)` pairs with `d x = x d + 1`.
    pub fn weyl_pairs(&self) -> Vec<(usize, usize)> {
        match (
            self.block_of_kind(BlockKind::X),
            self.block_of_kind(BlockKind::DX),
        ) {
            (Some(x), Some(d)) => x.vars().zip(d.vars()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn grading(&self, name: &str) -> Result<&[u32]> {
        self.gradings
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidInput(format!("unknown grading `{name}`")))
    }

    /// Copy of this context with an extra grading registered.
    pub fn with_grading(&self, name: &str, weights: Vec<u32>) -> Result<Arc<Self>> {
        if weights.len() != self.nvars() {
            return Err(Error::InvalidInput("grading arity mismatch".into()));
        }
        let mut c = self.clone();
        c.gradings.insert(name.to_string(), weights);
        Ok(Arc::new(c))
    }

    /// Copy of this context with one more block appended.
    pub fn extended<S: AsRef<str>>(&self, kind: BlockKind, bname: &str, vars: &[S]) -> Result<Arc<Self>> {
        let mut blocks: Vec<(BlockKind, &str, Vec<String>)> = self
            .blocks
            .iter()
            .map(|b| (b.kind, b.name.as_str(), self.names[b.vars()].to_vec()))
            .collect();
        blocks.push((
            kind,
            bname,
            vars.iter().map(|v| v.as_ref().to_string()).collect(),
        ));
        let mut ctx = (*Self::new(&blocks)?).clone();
        for (name, w) in &self.gradings {
            if !ctx.gradings.contains_key(name) {
                let mut w = w.clone();
                w.resize(ctx.nvars(), 0);
                ctx.gradings.insert(name.clone(), w);
            }
        }
        Ok(Arc::new(ctx))
    }

    /// Same variables with the `DX` block relabelled as `Y` symbols.
    pub fn symbol_context(&self, rename: impl Fn(&str) -> String) -> Result<Arc<Self>> {
        let blocks: Vec<(BlockKind, String, Vec<String>)> = self
            .blocks
            .iter()
            .map(|b| {
                let vars = self.names[b.vars()].to_vec();
                if b.kind == BlockKind::DX {
                    (BlockKind::Y, "Y".to_string(), vars.iter().map(|v| rename(v)).collect())
                } else {
                    (b.kind, b.name.clone(), vars)
                }
            })
            .collect();
        let refs: Vec<(BlockKind, &str, Vec<String>)> = blocks
            .iter()
            .map(|(k, n, v)| (*k, n.as_str(), v.clone()))
            .collect();
        Self::new(&refs)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
