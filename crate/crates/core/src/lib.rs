//! Finite-field arithmetic and permutation polynomial verification.

pub mod exec;
pub mod families;
pub mod field;
pub mod framework;
pub mod linear;
pub mod poly;
