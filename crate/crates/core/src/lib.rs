//! Exact computations in Iwahori-Hecke algebras with unequal parameters:
//! Kazhdan-Lusztig bases, balanced representations, the asymptotic ring
//! and its cellular basis.

pub mod asymptotic;
pub mod cellular;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod pipeline;
pub mod reps;
pub mod scalars;

pub use error::{Error, Result};
