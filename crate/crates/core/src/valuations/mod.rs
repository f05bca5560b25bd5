//! Valuations on convex polygons and the constants that normalise them.

mod catalog;
pub mod constants;
mod harmonic;
mod mixed;
mod tensor;

pub use catalog::{Prepared, Valuation, ValuationSet, MAX_HARMONIC_DEGREE, MAX_TENSOR_RANK};
pub use constants::{Constant, ConstantsTable};
pub use harmonic::{harmonic_iv, harmonic_of_measure, rotation_average_harmonic, HarmonicIndex};
pub use mixed::mixed_area;
pub use tensor::{minkowski_tensor, SymTensor};
