//! Finite, exactly computable models of character stacks of finitely presented
//! groups, excursion operators and twisted Hochschild traces, together with the
//! identity checks relating them (S = T, partial Frobenius descent, cyclicity,
//! class = twisted trace, Chern character = tautological excursion).

pub mod error;
pub mod charstack;
pub mod exactfield;
pub mod excursion;
pub mod groups;
pub mod reptheory;
pub mod shtuka;
pub mod tracecalc;

pub use error::{Error, Result};
