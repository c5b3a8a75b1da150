//! Exact rational polynomials over named variable blocks.

mod context;
mod mono;
mod order;
pub mod parse;
mod poly;
pub mod rat;

pub use context::{
    is_identifier, Block, BlockKind, VarContext, GRADING_ORDER, GRADING_STANDARD,
    GRADING_TOTAL_ORDER, GRADING_Y_ONLY,
};
pub use mono::{Exp, Mono};
pub use order::{MonomialOrder, OrderKind};
pub use parse::{parse_poly, ExprRing};
pub use poly::{determinant, grevlex_cmp, Poly};
pub use rat::{rat, ratio, Rat};
