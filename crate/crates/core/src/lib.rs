//! Channel-impulse-response fingerprint localization with decorrelation filters.
//!
//! Everything in this crate is pure computation over explicit RNG state and
//! builds without `std`. File formats, configuration and the command line
//! live in the `dmnn` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod channel;
pub mod decorrelation;
mod error;
pub mod harness;
pub mod mlp;
pub mod rng;

pub use error::{Error, Result};
