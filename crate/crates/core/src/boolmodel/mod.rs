//! Stationary Boolean models with convex polygonal grains.

mod grain;
mod ie;
mod realization;

pub use grain::{GrainModel, OrientationLaw, ScaleLaw};
pub use ie::{
    boundary_corrected_functional, eval_boundary_corrected, eval_union, union_functional, union_valuation, union_valuation_exhaustive,
    DEFAULT_NODE_CAP,
};
pub use realization::{
    hitting_count, hitting_intensity, sample_realization, sample_replicate, sample_stream, BooleanModelSpec, Grain,
    Realization, SeedRecord, DEFAULT_GERM_CAP,
};
