//! Computer algebra for logarithmic derivations, Weyl-algebra annihilators and
//! Bernstein–Sato ideals of factorized polynomials over ℚ.

pub mod arrange;
pub mod bside;
pub mod error;
pub mod gb;
pub mod linalg;
pub mod liouville;
pub mod logder;
pub mod nabla;
pub mod par;
pub mod ring;
pub mod spencer;
pub mod weyl;

pub use error::{Error, Result};
