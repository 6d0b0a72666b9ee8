//! Exact factorization invariants for zero-sum monoids, seminormal finitely
//! primary monoids and T-block monoids over small finite abelian groups.

pub mod checks;
pub mod cli;
pub mod error;
pub mod factor;
pub mod groups;
pub mod primary;
pub mod tblock;
pub mod zerosum;

pub use error::{Error, Result};
