use serde::{Deserialize, Serialize};

use super::{BBox, ConvexPolygon, PolygonError, Vec2};

/// A full-dimensional convex observation window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConvexPolygon", into = "ConvexPolygon")]
pub struct Window {
    polygon: ConvexPolygon,
}

impl TryFrom<ConvexPolygon> for Window {
    type Error = PolygonError;

    fn try_from(polygon: ConvexPolygon) -> Result<Self, Self::Error> {
        Window::new(polygon)
    }
}

impl From<Window> for ConvexPolygon {
    fn from(w: Window) -> Self {
        w.polygon
    }
}

/// The upper-right boundary `∂⁺C` split into convex pieces: edges whose outer
/// normal lies in `[0, π/2]`, and the vertices shared by consecutive ones.
///
/// For any valuation `φ(Z ∩ ∂⁺C) = Σ φ(Z ∩ edge) − Σ φ(Z ∩ corner)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperRightBoundary {
    pub edges: Vec<ConvexPolygon>,
    pub corners: Vec<ConvexPolygon>,
}

impl Window {
    pub fn new(polygon: ConvexPolygon) -> Result<Self, PolygonError> {
        if polygon.dim() != Some(2) || polygon.area() <= 0.0 {
            return Err(PolygonError::NotFullDimensional);
        }
        Ok(Self { polygon })
    }

    /// Axis-parallel rectangle `[min.x, max.x] × [min.y, max.y]`.
    pub fn rect(min: Vec2, max: Vec2) -> Result<Self, PolygonError> {
        Self::new(ConvexPolygon::rect_at(min, max))
    }

    pub fn unit_square() -> Self {
        Self {
            polygon: ConvexPolygon::square(1.0),
        }
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        &self.polygon
    }

    pub fn area(&self) -> f64 {
        self.polygon.area()
    }

    pub fn bbox(&self) -> BBox {
        self.polygon.bbox().expect("window is nonempty")
    }

    /// `W ⊕ [−r, r]²`.
    pub fn dilate(&self, r: f64) -> Window {
        let sq = ConvexPolygon::rect_at(Vec2::new(-r, -r), Vec2::new(r, r));
        Window {
            polygon: super::minkowski_sum(&self.polygon, &sq),
        }
    }

    /// Whether `c ⊕ [−r, r]²` lies inside the window.
    pub fn contains_with_margin(&self, c: &ConvexPolygon, r: f64) -> bool {
        let sq = ConvexPolygon::rect_at(Vec2::new(-r, -r), Vec2::new(r, r));
        self.polygon
            .contains_polygon(&super::minkowski_sum(c, &sq))
    }

    pub fn upper_right_boundary(&self) -> UpperRightBoundary {
        let vs = self.polygon.vertices();
        let n = vs.len();
        let is_upper = |i: usize| {
            let e = vs[(i + 1) % n] - vs[i];
            // outer normal (e.y, −e.x) in the closed first quadrant
            e.y >= 0.0 && -e.x >= 0.0
        };
        let mut edges = Vec::new();
        let mut corners = Vec::new();
        for i in 0..n {
            if is_upper(i) {
                edges.push(ConvexPolygon::segment(vs[i], vs[(i + 1) % n]));
                if is_upper((i + 1) % n) {
                    corners.push(ConvexPolygon::point(vs[(i + 1) % n]));
                }
            }
        }
        UpperRightBoundary { edges, corners }
    }
}
