//! Secrecy outage probability (SOP) of the three-node wiretap channel over
//! generalized-K fading.
//!
//! The crate provides
//! - [`specfun`]: gamma family, Bessel K and a Mellin–Barnes Meijer-G engine,
//! - [`gk_model`]: the generalized-K distribution (PDF, CDF, moments),
//! - [`sop`]: the second-order moment-matching SOP approximation, its Rayleigh
//!   and Nakagami-m closed forms, high-SNR asymptotics and an exact quadrature,
//! - [`montecarlo`]: a deterministic parallel Monte-Carlo estimator,
//! - [`validation`]: the self-check suite run by `gk-secrecy validate`,
//! - [`cli`]: the command-line front end.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod gk_model;
pub mod montecarlo;
pub mod quad;
pub mod sop;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
pub use gk_model::{GkParams, SnrValue};
pub use montecarlo::{sop_mc, McConfig, McResult};
pub use sop::{SecrecyScenario, SopEstimate, SopMethod};

/// Converts decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
