use serde::Serialize;

use super::{
    der_log_pdim, euler_and_seh_check, is_reduced, koszul_free_check, log_characteristic_dimension, saito_basis,
    tameness_check, FactorizationSpec,
};
use crate::error::Result;
use crate::gb::Limits;
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

/// A verdict plus the name of the operation that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub verdict: Verdict,
    pub by: String,
}

impl Check {
    fn new(verdict: Verdict, by: &str) -> Self {
        Check {
            verdict,
            by: by.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    pub strong_euler_homogeneous: Check,
    pub reduced: Check,
    pub free: Check,
    pub koszul_free: Check,
    pub tame: Check,
    pub saito_holonomic: Check,
    pub arrangement: Check,
}

impl Hypotheses {
    /// The conditions under which `θ_F` generates the whole annihilator.
    pub fn annihilator_by_derivations(&self) -> bool {
        self.strong_euler_homogeneous.verdict.is_yes()
            && self.tame.verdict.is_yes()
            && self.saito_holonomic.verdict.is_yes()
    }

    pub fn reduced_free(&self) -> bool {
        self.reduced.verdict.is_yes() && self.free.verdict.is_yes()
    }
}

/// Runs every hypothesis check on `f`. `arrangement` marks inputs declared
/// as products of linear forms.
pub fn check_hypotheses(spec: &FactorizationSpec, arrangement: bool, limits: Limits) -> Result<Hypotheses> {
    let f = spec.f();
    let exec = Exec::default();
    let seh = euler_and_seh_check(f);
    let ((reduced, basis), (tame, sh)) = exec.join(
        || exec.join(|| is_reduced(f, limits), || saito_basis(f, limits)),
        || {
            exec.join(
                || tameness_check(f, limits),
                || -> Result<Check> {
                    if arrangement {
                        return Ok(Check::new(Verdict::Yes, "arrangement"));
                    }
                    let d = log_characteristic_dimension(f, limits)?;
                    Ok(Check::new(
                        Verdict::from_bool(d == spec.n() as i64),
                        "log_characteristic_dimension",
                    ))
                },
            )
        },
    );
    let (reduced, basis, tame, sh) = (reduced?, basis?, tame?, sh?);
    // without a positive grading the basis search cannot refute freeness
    let free = match &basis {
        Some(_) => Check::new(Verdict::Yes, "saito_basis"),
        None => match der_log_pdim(f, limits)? {
            Some(0) => Check::new(Verdict::Yes, "der_log_pdim"),
            Some(_) => Check::new(Verdict::No, "der_log_pdim"),
            None => Check::new(Verdict::Unknown, "saito_basis"),
        },
    };
    let koszul = match &basis {
        Some(b) => Check::new(Verdict::from_bool(koszul_free_check(b, limits)?), "koszul_free_check"),
        None if free.verdict == Verdict::No => Check::new(Verdict::No, "der_log_pdim"),
        None => Check::new(Verdict::Unknown, "saito_basis"),
    };
    Ok(Hypotheses {
        strong_euler_homogeneous: Check::new(seh.strong_at_origin, "euler_and_seh_check"),
        reduced: Check::new(Verdict::from_bool(reduced), "is_reduced"),
        free,
        koszul_free: koszul,
        tame: Check::new(tame.verdict, "tameness_check"),
        saito_holonomic: sh,
        arrangement: Check::new(Verdict::from_bool(arrangement), "input"),
    })
}
