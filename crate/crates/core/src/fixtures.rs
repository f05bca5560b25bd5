//! Reference bodies and models shared by the verification suites.

use crate::boolmodel::{BooleanModelSpec, GrainModel, OrientationLaw};
use crate::geom2d::{ConvexPolygon, Vec2, Window};

fn poly(c: &[f64]) -> ConvexPolygon {
    ConvexPolygon::from_flat(c).expect("fixture polygons are convex")
}

/// Named pairs `(K, M)` for the translative checks, including asymmetric
/// bodies and a segment.
pub fn translative_pairs() -> Vec<(&'static str, ConvexPolygon, ConvexPolygon)> {
    let tri = poly(&[0.0, 0.0, 1.0, 0.2, 0.3, 0.9]);
    vec![
        ("squares", ConvexPolygon::square(1.0), ConvexPolygon::square(1.0).translate(Vec2::new(0.3, -0.2))),
        ("triangle-rectangle", tri.clone(), ConvexPolygon::rect(2.0, 0.5)),
        ("pentagon-triangle", ConvexPolygon::regular_ngon(5, 1.0), tri.clone()),
        (
            "hexagon-segment",
            ConvexPolygon::regular_ngon(6, 0.8),
            ConvexPolygon::segment(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.4)),
        ),
        ("quadrilateral-triangle", poly(&[0.0, 0.0, 2.0, 0.0, 2.5, 1.0, 0.1, 0.7]), tri.rotate(2.0)),
        ("disk-square", ConvexPolygon::regular_ngon(32, 0.6), ConvexPolygon::square(0.9).rotate(0.4)),
    ]
}

/// Three bodies for the iterated translative check.
pub fn iterated_triple() -> [ConvexPolygon; 3] {
    [
        ConvexPolygon::square(1.0),
        poly(&[0.0, 0.0, 1.0, 0.2, 0.3, 0.9]),
        ConvexPolygon::regular_ngon(5, 0.5),
    ]
}

/// Pairs for the kinematic checks; the last one is a pair of unit disks.
pub fn kinematic_pairs() -> Vec<(&'static str, ConvexPolygon, ConvexPolygon)> {
    vec![
        ("squares", ConvexPolygon::square(1.0), ConvexPolygon::square(1.0).translate(Vec2::new(-0.5, -0.5))),
        (
            "triangle-rectangle",
            poly(&[0.0, 0.0, 1.0, 0.2, 0.3, 0.9]),
            ConvexPolygon::rect(1.5, 0.4).translate(Vec2::new(-0.75, -0.2)),
        ),
        (
            "pentagon-segment",
            ConvexPolygon::regular_ngon(5, 1.0),
            ConvexPolygon::segment(Vec2::new(-0.6, 0.0), Vec2::new(0.6, 0.0)),
        ),
        ("unit-disks", ConvexPolygon::regular_ngon(256, 1.0), ConvexPolygon::regular_ngon(256, 1.0)),
    ]
}

/// Isotropic model: `γ = 50`, disks of radius 0.05 as 256-gons with uniform
/// rotations, unit-square cell.
pub fn disks() -> BooleanModelSpec {
    let g = GrainModel::single(ConvexPolygon::regular_ngon(256, 0.05), OrientationLaw::Uniform)
        .expect("valid grain law");
    BooleanModelSpec::new(50.0, g, Window::unit_square()).expect("valid model")
}

/// Anisotropic model: `γ = 30`, axis-parallel squares of side 0.1.
pub fn squares() -> BooleanModelSpec {
    let g = GrainModel::single(ConvexPolygon::square(0.1), OrientationLaw::Fixed).expect("valid grain law");
    BooleanModelSpec::new(30.0, g, Window::unit_square()).expect("valid model")
}
