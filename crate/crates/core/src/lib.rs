//! Dynamic Bertrand duopoly with CES demand and gradient price adjustment.
//!
//! The crate has two halves. The exact half ([`exactpoly`], [`equilibrium`],
//! most of [`stability`]) works in rational arithmetic: triangular sets for
//! the equilibria, Sturm counting, resultants and the critical polynomials
//! that decide local stability. The numeric half ([`model`], [`dynamics`])
//! iterates the price map in binary64 and classifies what it sees.

pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod exactpoly;
pub mod model;
pub mod par;
pub mod stability;

pub use error::{Error, Result};
pub use model::{ModelParams, PriceState, QuantityPair};
pub use par::Exec;
