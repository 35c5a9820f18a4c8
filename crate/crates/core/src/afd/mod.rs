//! Domain types and the greedy decomposition loop.

pub mod decompose;
pub mod field;
pub mod grid;
pub mod kernel;
pub mod signal;
