// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(feature = "cli")]
pub mod cli;
pub mod eig;
pub mod gap;
pub mod linalg;
pub mod model;
pub mod pencil;
pub mod reference;
