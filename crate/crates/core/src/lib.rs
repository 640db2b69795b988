//! Patterns of marginal independence for multipartite quantum systems.
//!
//! The crate works entirely in exact arithmetic. [`entropy_space`] fixes the
//! coordinates, [`mia`] builds the mutual information arrangement and its
//! lattice of patterns, [`cones`] turns entropy inequalities into cones and
//! their extreme rays, [`gset`] computes the patterns compatible with a set of
//! inequalities, and [`states`] provides entropy vectors of concrete states.

pub mod bitset;
pub mod cli;
pub mod cones;
pub mod entropy_space;
pub mod error;
pub mod exact;
pub mod gset;
pub mod linalg;
pub mod mia;
pub mod states;

pub use error::{Error, Result};
