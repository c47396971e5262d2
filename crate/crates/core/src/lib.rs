//! Modular symbols for rational newforms on Gamma0(N), a numeric L-value oracle, and
//! verification of 2-adic lower bounds for central values of quadratic twists.

pub mod analytic;
pub mod arith;
pub mod curve;
pub mod error;
pub mod linalg;
pub mod modsym;
pub mod twist;
pub mod verifier;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
