//! Exact convex-polygon kernel for the plane.
//!
//! Everything downstream (valuations, translative integrals, Boolean-model
//! inclusion-exclusion) is built on [`ConvexPolygon`] and the discrete
//! measures it carries: the area measure [`SphereMeasure`] and the support
//! measure pieces [`SupportMeasurePieces`].
//!
//! Degenerate bodies (points, segments) and the empty body are first-class.

mod arc;
mod circle;
mod clip;
mod measure;
mod minkowski;
mod polygon;
mod support;
mod vec2;
mod window;

pub use arc::{arc_moment, normalize_angle};
pub use circle::{min_enclosing_circle, Circle};
pub use clip::intersect;
pub use measure::{area_measure, SphereMeasure};
pub use minkowski::{minkowski_sum, reflect};
pub use polygon::{BBox, ConvexPolygon, PolygonError};
pub use support::{
    centered_support, steiner_point, support, support_integral, support_measure_pieces, EdgePiece,
    SupportMeasurePieces, VertexPiece,
};
pub use vec2::Vec2;
pub use window::Window;

/// Absolute tolerance used by all geometric predicates.
///
/// Coordinates are assumed to be O(1)–O(10²).
pub const TOL: f64 = 1e-9;

/// Tolerance for identifying two angles on the unit circle.
pub const ANGLE_TOL: f64 = 1e-9;
