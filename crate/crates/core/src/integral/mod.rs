//! Translative and kinematic integral geometry in the plane.

mod functional;
mod mc;
mod mix;

pub use functional::{
    kernel_mixed_area, mixed_functional, mixed_functional_v, rotation_average_v11,
    symmetric_kernel_mixed_area, translative_rhs, v11,
};
pub(crate) use mc::PolygonSampler;
pub use mc::{iterated_translative_mc, kinematic_mc, pkf_rhs, translative_mc, McEstimate};
pub use mix::{enumerate_mix, enumerate_mix_reduced, MixedIndex};
