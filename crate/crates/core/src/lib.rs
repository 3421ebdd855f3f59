//! Simulation and numerical checks for the critical Norros–Reittu random graph.
//!
//! Vertices are labelled `0..n` throughout; vertex `i` carries the weight
//! `w[i]`, which is the `(i + 1)`-th largest weight.

pub mod alias;
pub mod bounds;
pub mod bp;
pub mod dist;
pub mod error;
pub mod explore;
pub mod mc;
pub mod numeric;
pub mod oracle;
pub mod poisson;
pub mod quad;
pub mod rng;
pub mod sampler;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
