//! Masked-face synthesis and masked verification benchmarking.
//!
//! [`compose`] puts a mask template on a face, [`dataset`] builds
//! scenario-balanced verification pair sets from it, and [`eval`] scores
//! embedding tables with 10-fold verification accuracy.

pub mod compose;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod gallery;
pub mod geometry;
pub mod imaging;
pub mod rng;
pub mod synth;

pub use error::{Error, Result};
