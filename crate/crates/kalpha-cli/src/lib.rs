//! Library surface of the `kalpha` binary, exposed for integration tests.

// Negated comparisons are deliberate: `!(a < b)` rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod export;
pub mod run;
