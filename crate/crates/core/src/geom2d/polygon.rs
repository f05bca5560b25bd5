use serde::{Deserialize, Serialize};

use super::{Vec2, TOL};

/// Errors raised when constructing a polygon from raw coordinates.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolygonError {
    #[error("polygon coordinates must be finite")]
    NonFinite,
    #[error("vertex list has odd length {0}; expected flat (x, y) pairs")]
    OddCoordinateCount(usize),
    #[error("vertices are not a counterclockwise convex chain (turn {turn:.3e} at vertex {index})")]
    NotConvex { index: usize, turn: f64 },
    #[error("a window must be a full-dimensional polygon with positive area")]
    NotFullDimensional,
    #[error("invalid generator argument: {0}")]
    BadGenerator(String),
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Vec2,
    pub max: Vec2,
}

impl BBox {
    pub fn overlaps(&self, o: &BBox) -> bool {
        self.min.x <= o.max.x + TOL
            && o.min.x <= self.max.x + TOL
            && self.min.y <= o.max.y + TOL
            && o.min.y <= self.max.y + TOL
    }

    pub fn contains_box(&self, o: &BBox) -> bool {
        o.min.x >= self.min.x - TOL
            && o.min.y >= self.min.y - TOL
            && o.max.x <= self.max.x + TOL
            && o.max.y <= self.max.y + TOL
    }

    pub fn area(&self) -> f64 {
        (self.max.x - self.min.x) * (self.max.y - self.min.y)
    }

    pub fn expand(&self, r: f64) -> BBox {
        BBox {
            min: self.min - Vec2::new(r, r),
            max: self.max + Vec2::new(r, r),
        }
    }
}

/// A convex body in the plane given by its vertices in counterclockwise order.
///
/// The vertex count encodes the dimension: no vertices is the empty body, one
/// vertex a point, two vertices a segment, three or more a proper polygon.
/// Segments are treated as closed 2-gons (edges `a→b` and `b→a`), which makes
/// perimeter, area measure and support measure conventions fall out uniformly.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        Self { vertices: Vec::new() }
    }

    pub fn point(p: Vec2) -> Self {
        Self { vertices: vec![p] }
    }

    /// Segment `[p, q]`; collapses to a point when `p ≈ q`.
    pub fn segment(p: Vec2, q: Vec2) -> Self {
        if p.dist(q) <= TOL {
            Self::point(p)
        } else {
            Self { vertices: vec![p, q] }
        }
    }

    /// Axis-aligned square `[0, side]²`.
    pub fn square(side: f64) -> Self {
        Self::rect(side, side)
    }

    /// Axis-aligned rectangle `[0, a] × [0, b]`.
    pub fn rect(a: f64, b: f64) -> Self {
        Self::rect_at(Vec2::ZERO, Vec2::new(a, b))
    }

    /// Axis-aligned rectangle with the given corners.
    pub fn rect_at(min: Vec2, max: Vec2) -> Self {
        Self::convex_hull(&[
            min,
            Vec2::new(max.x, min.y),
            max,
            Vec2::new(min.x, max.y),
        ])
    }

    /// Regular `m`-gon with circumradius `r`, centred at the origin, first
    /// vertex on the positive x-axis.
    pub fn regular_ngon(m: usize, r: f64) -> Self {
        assert!(m >= 3, "regular_ngon needs at least 3 vertices");
        let vertices = (0..m)
            .map(|k| Vec2::from_angle(std::f64::consts::TAU * k as f64 / m as f64) * r)
            .collect();
        Self { vertices }
    }

    /// Build from counterclockwise vertices, validating convexity.
    ///
    /// Duplicate and collinear vertices are dropped.
    pub fn from_ccw(vertices: Vec<Vec2>) -> Result<Self, PolygonError> {
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(PolygonError::NonFinite);
        }
        let area2: f64 = (0..vertices.len())
            .map(|i| vertices[i].cross(vertices[(i + 1) % vertices.len()]))
            .sum();
        if area2 < -TOL {
            return Err(PolygonError::NotConvex {
                index: 0,
                turn: area2,
            });
        }
        let poly = Self::cleanup(vertices);
        let n = poly.vertices.len();
        if n >= 3 {
            let mut winding = 0.0;
            for i in 0..n {
                let e0 = poly.vertices[(i + 1) % n] - poly.vertices[i];
                let e1 = poly.vertices[(i + 2) % n] - poly.vertices[(i + 1) % n];
                let turn = e0.cross(e1);
                if turn < -TOL * e0.norm() * e1.norm() {
                    return Err(PolygonError::NotConvex {
                        index: (i + 1) % n,
                        turn,
                    });
                }
                winding += turn.atan2(e0.dot(e1));
            }
            if (winding - std::f64::consts::TAU).abs() > 1e-6 {
                return Err(PolygonError::NotConvex { index: 0, turn: winding });
            }
        }
        Ok(poly)
    }

    /// Build from a flat `[x0, y0, x1, y1, ...]` list of counterclockwise vertices.
    pub fn from_flat(coords: &[f64]) -> Result<Self, PolygonError> {
        if !coords.len().is_multiple_of(2) {
            return Err(PolygonError::OddCoordinateCount(coords.len()));
        }
        Self::from_ccw(coords.chunks(2).map(|c| Vec2::new(c[0], c[1])).collect())
    }

    /// Flat `[x0, y0, ...]` coordinate list.
    pub fn to_flat(&self) -> Vec<f64> {
        self.vertices.iter().flat_map(|v| [v.x, v.y]).collect()
    }

    /// Convex hull of an arbitrary point set (monotone chain).
    pub fn convex_hull(points: &[Vec2]) -> Self {
        let mut pts: Vec<Vec2> = points.to_vec();
        pts.sort_by(|a, b| a.lex_cmp(b));
        pts.dedup_by(|a, b| a.dist(*b) <= TOL);
        if pts.len() <= 2 {
            return Self::cleanup(pts);
        }
        let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() * 2);
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
                Box::new(pts.iter())
            } else {
                Box::new(pts.iter().rev())
            };
            for &p in iter {
                while hull.len() >= start + 2 {
                    let a = hull[hull.len() - 2];
                    let b = hull[hull.len() - 1];
                    if (b - a).cross(p - a) <= 0.0 {
                        hull.pop();
                    } else {
                        break;
                    }
                }
                hull.push(p);
            }
            hull.pop();
        }
        Self::cleanup(hull)
    }

    /// Normalise a vertex chain produced by clipping or merging: drop
    /// near-duplicate and near-collinear vertices and reduce flat chains to
    /// segments or points.
    pub(crate) fn cleanup(mut pts: Vec<Vec2>) -> Self {
        // near-duplicates, cyclically
        let mut changed = true;
        while changed && pts.len() > 1 {
            changed = false;
            let n = pts.len();
            let mut out: Vec<Vec2> = Vec::with_capacity(n);
            for &p in &pts {
                if out.last().is_some_and(|q: &Vec2| q.dist(p) <= TOL) {
                    changed = true;
                    continue;
                }
                out.push(p);
            }
            if out.len() > 1 && out[0].dist(*out.last().unwrap()) <= TOL {
                out.pop();
                changed = true;
            }
            pts = out;
        }
        // collinear middle vertices
        let mut changed = pts.len() >= 3;
        while changed && pts.len() >= 3 {
            changed = false;
            let n = pts.len();
            for i in 0..n {
                let a = pts[(i + n - 1) % n];
                let b = pts[i];
                let c = pts[(i + 1) % n];
                let ac = c - a;
                let len = ac.norm();
                if len <= TOL {
                    continue;
                }
                let between = (b - a).dot(c - b) >= 0.0;
                if between && (ac.cross(b - a) / len).abs() <= TOL {
                    pts.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        if pts.len() >= 3 {
            // flat chain that survived (e.g. back-and-forth): collapse to extreme points
            let area2: f64 = (0..pts.len())
                .map(|i| pts[i].cross(pts[(i + 1) % pts.len()]))
                .sum();
            // bounding-box diagonal as the length scale, within √2 of the diameter
            let (mut lo, mut hi) = (pts[0], pts[0]);
            for p in &pts {
                lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
                hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
            }
            let diam = lo.dist(hi);
            if area2.abs() <= TOL * diam.max(1.0) {
                let (mut lo, mut hi) = (pts[0], pts[0]);
                for &p in &pts {
                    if p.lex_cmp(&lo).is_lt() {
                        lo = p;
                    }
                    if p.lex_cmp(&hi).is_gt() {
                        hi = p;
                    }
                }
                return Self::segment(lo, hi);
            }
            if area2 < 0.0 {
                pts.reverse();
            }
        }
        if pts.len() == 2 && pts[0].dist(pts[1]) <= TOL {
            pts.pop();
        }
        Self { vertices: pts }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension: `None` for the empty body, else 0, 1 or 2.
    pub fn dim(&self) -> Option<usize> {
        match self.vertices.len() {
            0 => None,
            1 => Some(0),
            2 => Some(1),
            _ => Some(2),
        }
    }

    /// Directed boundary edges `(a, b)` of the closed vertex cycle.
    ///
    /// A segment yields both orientations; a point yields none.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        let count = if n >= 2 { n } else { 0 };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area (zero for degenerate bodies).
    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            return 0.0;
        }
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    /// Length of the closed boundary cycle; twice the length for a segment.
    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    /// `(V_0, V_1, V_2)`: Euler characteristic, half perimeter, area.
    pub fn intrinsic_volumes(&self) -> [f64; 3] {
        if self.is_empty() {
            return [0.0; 3];
        }
        [1.0, 0.5 * self.perimeter(), self.area()]
    }

    pub fn bbox(&self) -> Option<BBox> {
        let first = *self.vertices.first()?;
        let mut b = BBox { min: first, max: first };
        for v in &self.vertices[1..] {
            b.min.x = b.min.x.min(v.x);
            b.min.y = b.min.y.min(v.y);
            b.max.x = b.max.x.max(v.x);
            b.max.y = b.max.y.max(v.y);
        }
        Some(b)
    }

    pub fn translate(&self, t: Vec2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v + t).collect(),
        }
    }

    /// Rotation about the origin.
    pub fn rotate(&self, theta: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v.rotate(theta)).collect(),
        }
    }

    /// Homothety `α·P` about the origin, `α ≥ 0`.
    pub fn scale(&self, alpha: f64) -> Self {
        assert!(alpha >= 0.0, "scale factor must be nonnegative");
        if alpha == 0.0 {
            return if self.is_empty() {
                Self::empty()
            } else {
                Self::point(Vec2::ZERO)
            };
        }
        Self {
            vertices: self.vertices.iter().map(|&v| v * alpha).collect(),
        }
    }

    /// Largest distance of a vertex from the origin.
    pub fn max_norm(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Point containment with tolerance [`TOL`].
    pub fn contains(&self, p: Vec2) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0].dist(p) <= TOL,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                let ab = b - a;
                let t = (p - a).dot(ab) / ab.norm_sq();
                (-TOL..=1.0 + TOL).contains(&t) && (ab.cross(p - a) / ab.norm()).abs() <= TOL
            }
            _ => self
                .edges()
                .all(|(a, b)| (b - a).cross(p - a) >= -TOL * (b - a).norm()),
        }
    }

    /// Whether `other` lies inside `self` (within tolerance).
    pub fn contains_polygon(&self, other: &ConvexPolygon) -> bool {
        other.vertices.iter().all(|&v| self.contains(v))
    }
}
