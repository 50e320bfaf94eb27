//! Exact computation of equivariant Euler data and the enumerative
//! invariants read off from them.

pub mod algebra;
pub mod engine;
pub mod invariants;
pub mod solver;
