//! Bit-exact simulation of an OFDM radar range estimator whose IFFT runs on
//! approximate 16-bit adders and multipliers, plus the tooling to explore the
//! resulting accuracy/area/power design space.
//!
//! The crate is organised bottom-up:
//!
//! - [`fxp`]: Q1.15 samples, exact and approximate operator models, operator pairs.
//! - [`errstat`]: EP / MAE / WCE / MRE characterisation of a single operator.
//! - [`transform`]: radix-2 DIT IFFT over an injected operator pair.
//! - [`radar`]: frame generation, channel, spectral division and periodogram
//!   range estimation.
//! - [`dse`]: SNR sweeps, cost-table joins, constraint filtering and Pareto fronts.

pub mod dse;
pub mod errstat;
mod error;
pub mod fxp;
pub mod radar;
pub mod transform;

pub use error::{Error, Result};
