//! Exact models for the cohomology of real moment-angle complexes and polyhedral products.

pub mod dga;
pub mod error;
pub mod koszul;
pub mod linalg;
pub mod polyhedral;
pub mod real_mac;
pub mod report;
pub mod simplicial;
pub mod verify;

/// Randomized invariants across modules.
#[cfg(test)]
mod properties;

pub use error::{Error, Result};
