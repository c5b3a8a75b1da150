//! Commutative Gröbner bases over ℚ and the ideal/module queries built on them.

pub(crate) mod engine;
mod grading;
mod ideal;
mod module;

use serde::Serialize;

pub use grading::find_positive_grading;
pub use ideal::IdealHandle;
pub use module::{
    graded_free_resolution, minimal_generators, syzygies, GradedModulePresentation, Resolution,
    Submodule,
};

/// Bounds on a single Gröbner computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest total degree of any basis element.
    pub max_degree: u32,
    /// Largest number of basis elements.
    pub max_basis: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 60,
            max_basis: 20_000,
        }
    }
}
