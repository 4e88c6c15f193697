//! Boundary-strata formulas for `ψ^g − λ1ψ^{g−1} + ⋯ + (−1)^g λ_g` on the
//! moduli space of 1-pointed genus-g stable curves.

pub mod builders;
pub mod cache;
pub mod cli;
pub mod error;
pub mod expand;
pub mod laurent;
pub mod localization;
pub mod ops;
pub mod par;
pub mod poly;
pub mod rational;
pub mod render;
pub mod report;
pub mod strata;

pub use error::{Error, Result};
pub use rational::Rational;
pub use report::{Check, RelationReport};
pub use strata::{Ambient, DecoratedStratum, TautClass};
