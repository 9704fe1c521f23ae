//! Numerical engine for Fock-adapted contraction operator cocycles.
//!
//! A bounded block generator `F = [K M; L C−I]` determines a left contraction
//! cocycle through its associated semigroups `Q^{c,d}_t = exp(t G_{c,d})`.
//! Cocycle matrix elements between exponential vectors of step functions are
//! ordered products of these semigroups; [`toyfock`] provides an independent
//! repeated-interaction approximation to cross-check them.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cocycle;
pub mod error;
pub mod generator;
pub mod io;
pub mod models;
pub mod opcore;
pub mod reconstruct;
pub mod semigroups;
pub mod toyfock;

pub use cocycle::StepFunction;
pub use error::{Error, Result};
pub use generator::{chi, BlockGenerator, Classification};
pub use opcore::{CMatrix, C64};
pub use semigroups::SemigroupFamily;
