//! Stationary Boolean models with convex polygonal grains.
//!
//! The crate evaluates valuations (intrinsic volumes, Minkowski tensors,
//! harmonic intrinsic volumes, centered support functions) on exact convex
//! polygons, checks translative and kinematic integral formulas, simulates
//! Boolean models, estimates their densities and recovers the intensity.

pub mod boolmodel;
pub mod error;
pub mod estimate;
pub mod fixtures;
pub mod geom2d;
pub mod integral;
pub mod rng;
pub mod stats;
pub mod valuations;

pub use error::{Error, Result};
