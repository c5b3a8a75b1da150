use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use dsalg::arrange::ArrangementSpec;
use dsalg::gb::Limits;
use dsalg::logder::FactorizationSpec;
use dsalg::ring::{parse_poly, Poly, VarContext};
use dsalg::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub factors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrangement: Option<ArrangementBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<Options>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementBlock {
    pub forms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u32>>,
    /// Factor index of each form; defaults to one factor per form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_basis: Option<usize>,
}

/// A parsed problem.
pub struct Problem {
    pub file: ProblemFile,
    pub spec: FactorizationSpec,
    pub arrangement: Option<ArrangementSpec>,
}

/// Parses `text`, pointing at the offending column on failure.
pub fn parse_with_caret(text: &str, ctx: &Arc<VarContext>, what: &str) -> anyhow::Result<Poly> {
    parse_poly(text, ctx).map_err(|e| {
        let pos = match &e {
            Error::Syntax { pos, .. } | Error::UnknownVariable { pos, .. } => Some(*pos),
            _ => None,
        };
        match pos {
            Some(p) => {
                let col = text[..p.min(text.len())].chars().count();
                anyhow::anyhow!("{what}: {e}\n  {text}\n  {}^", " ".repeat(col))
            }
            None => anyhow::anyhow!("{what}: {e}"),
        }
    })
}

pub fn load(path: &Path) -> anyhow::Result<ProblemFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

impl Problem {
    pub fn new(file: ProblemFile) -> anyhow::Result<Self> {
        if file.variables.is_empty() {
            bail!("`variables` is empty");
        }
        let ctx = VarContext::plain(&file.variables)?;
        let factors = file
            .factors
            .iter()
            .enumerate()
            .map(|(i, t)| parse_with_caret(t, &ctx, &format!("factor {}", i + 1)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let spec = FactorizationSpec::new(&ctx, factors)?;
        let arrangement = match &file.arrangement {
            None => None,
            Some(block) => {
                let forms = block
                    .forms
                    .iter()
                    .enumerate()
                    .map(|(i, f)| parse_with_caret(f, &ctx, &format!("form {}", i + 1)))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                let m = forms.len();
                let a = ArrangementSpec::new(
                    forms,
                    block.multiplicities.clone().unwrap_or_else(|| vec![1; m]),
                    block.groups.clone().unwrap_or_else(|| (0..m).collect()),
                )?;
                if !a.matches(&spec) {
                    bail!("arrangement block does not multiply out to the factors");
                }
                Some(a)
            }
        };
        Ok(Problem {
            file,
            spec,
            arrangement,
        })
    }

    pub fn limits(&self, max_degree: Option<u32>, max_basis: Option<usize>) -> Limits {
        let d = Limits::default();
        let o = self.file.options.clone().unwrap_or_default();
        Limits {
            max_degree: max_degree.or(o.max_degree).unwrap_or(d.max_degree),
            max_basis: max_basis.or(o.max_basis).unwrap_or(d.max_basis),
        }
    }

    pub fn order_name(&self, flag: Option<&str>) -> String {
        flag.map(str::to_string)
            .or_else(|| self.file.options.as_ref().and_then(|o| o.order.clone()))
            .unwrap_or_else(|| "elim".into())
    }
}
