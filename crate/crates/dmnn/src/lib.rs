//! Command line, configuration files and on-disk formats for `dmnn-core`.

pub mod cli;
pub mod config;
mod error;
pub mod experiment;
pub mod formats;

pub use error::{Error, Result};
