//! Exact generalization-error identities on finite model and data spaces.
//!
//! The crate tabulates every quantity involved: measures are stored as
//! log-masses over indexed finite sets, datasets are enumerated exhaustively,
//! and each closed-form expression for the generalization error is compared
//! against a brute-force double sum over pairs of datasets.
//!
//! - [`measures`]: finite measures, relative entropy, mutual and lautum information.
//! - [`learning`]: losses, empirical risks, and the joint measures induced by an algorithm.
//! - [`gibbs`]: Gibbs posteriors over models and algorithm-driven gaps.
//! - [`wcdg`]: worst-case data-generating measures and data-driven gaps.
//! - [`generror`]: the oracle and the catalog of identities checked against it.
//! - [`harness`]: scenario generation, batch runs and report emission.

pub mod error;
pub mod generror;
pub mod gibbs;
pub mod harness;
pub mod learning;
pub mod measures;
pub mod wcdg;

pub use error::{Error, Result};
