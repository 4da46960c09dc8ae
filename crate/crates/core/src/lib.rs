//! Conditional-independence ideals of generic hypermatrices.
//!
//! The crate builds the slice-minor ideals `I<t>` and their Segre
//! counterparts `Ĩ<t>` for an `r1 x ... x rn` hypermatrix, enumerates maximal
//! t-switchable sets (which index the minimal primes), and checks the
//! structural statements about these ideals with an exact Gröbner engine.

pub mod ciideals;
pub mod decomp;
pub mod error;
pub mod indexcomb;
pub mod polyengine;
pub mod switchable;

pub use error::{Error, Result};
