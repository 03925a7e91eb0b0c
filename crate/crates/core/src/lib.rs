//! Exact-arithmetic BSS machines over the reals, with symbolic analysis.

pub mod arith;
pub mod machine;
pub mod stdlib;
pub mod symbolic;
pub mod witness;
