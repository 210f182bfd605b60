//! Exact dynamics of the symmetric golden maps S_α and their jump
//! transformations T_α: expansions, matching, matching-interval atlases,
//! invariant densities and digit frequencies.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod measures;
pub mod montecarlo;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use field::{GoldenNum, Rat};
