//! Convex recovery of structured signals from random linear measurements.
//!
//! The crate provides random measurement ensembles ([`measure`]), convex
//! regularizers with exact subdifferential distances ([`reg`]), conic
//! Gaussian width bounds and estimators ([`width`]), small-ball estimators
//! for nonnegative empirical processes ([`smallball`]), minimum conic
//! singular values ([`conic`]), operator-splitting recovery solvers
//! including trace minimization for phase retrieval ([`solve`]), and a
//! seeded phase-transition experiment harness ([`harness`]).

pub mod cli;
pub mod conic;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod measure;
pub mod reg;
pub mod rng;
pub mod smallball;
pub mod solve;
pub mod stats;
pub mod width;

pub use error::{Error, Result};
