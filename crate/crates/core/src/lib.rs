//! Bounds, priors and covariant-measurement costs for single-parameter
//! unitary phase estimation at the π-corrected Heisenberg limit.
//!
//! The crate is split into four layers:
//!
//! - [`numerics`]: adaptive quadrature, special functions, a dense symmetric
//!   eigensolver and bisection root finding.
//! - [`priors`]: rectangular, comb, Kaiser-window and smeared-rectangle priors.
//! - [`bounds`]: closed-form lower bounds, the infinite-well oracle and the
//!   tail-correction function `R(ε)`.
//! - [`estimation`]: exact Bayesian costs of probe states under covariant
//!   measurements, the optimal probe, and Monte-Carlo validation.

pub mod bounds;
pub mod error;
pub mod estimation;
pub mod numerics;
pub mod priors;

pub use error::{Error, Result};
