//! Schottky groups of class-number-one definite Eichler orders.
//!
//! The crate computes, for each of the ten orders in [`order::order_lookup`],
//! the set of primary elements of prime norm `p`, the Schottky generators they
//! define, the pairing of the `p + 1` ends of the fundamental domain, and the
//! reduction graphs with lengths of the quotients of the Bruhat-Tits tree.

pub mod arithmetic;
pub mod enumerate;
pub mod error;
pub mod formulas;
pub mod generators;
pub mod graphs;
pub mod linalg;
pub mod order;
pub mod padic;
pub mod quaternion;

pub use error::{Error, Result};
pub use order::{order_lookup, EichlerOrder};
pub use quaternion::{Algebra, Quaternion};
