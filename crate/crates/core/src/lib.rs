//! Calibers of real quadratic fields.
//!
//! The caliber `κ(d)` of `Q(√d)` is the number of reduced binary quadratic
//! forms `[A, B, C]` of the field discriminant `D` satisfying
//!
//! ```text
//! A > 0, B < 0, C < 0, |B| < √D, √D − |B| < 2A < √D + |B|
//! ```
//!
//! The reduced forms split into cycles under one continued-fraction step on
//! their first root; the cycle count is the class number `h(d)` and each cycle
//! length is the period of every quadratic irrational in that class.
//!
//! Everything here is exact integer arithmetic. Comparisons against `√D` go
//! through [`arith::isqrt`] and rely on `D` never being a perfect square.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel scanning, output
//! formats and the command line live in the `caliber` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod classify;
pub mod contfrac;
mod error;
pub mod forms;
pub mod ideals;
pub mod scan;
pub mod theorems;

pub use arith::{Discriminant, FieldSpec, OmegaKind};
pub use contfrac::{CfExpansion, QuadraticIrrational};
pub use error::{Error, Result};
pub use forms::{CycleDecomposition, QuadForm};
pub use scan::{ScanContext, ScanFilter, ScanRecord, Verdicts};
pub use theorems::Verdict;
