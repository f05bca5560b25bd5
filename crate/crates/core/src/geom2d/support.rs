use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{arc_moment, ConvexPolygon, Vec2};

/// A vertex together with its cone of outer normals `[start, start + width]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexPiece {
    pub point: Vec2,
    /// Normal angle at which the cone starts, in `[0, 2π)`.
    pub start: f64,
    pub width: f64,
}

/// A boundary edge `a → b` with its outer normal angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgePiece {
    pub a: Vec2,
    pub b: Vec2,
    pub normal: f64,
}

impl EdgePiece {
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }
}

/// Boundary decomposition carrying the support measures: `Λ_0` lives on the
/// vertex cones, `Λ_1` on the edges.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SupportMeasurePieces {
    pub vertices: Vec<VertexPiece>,
    pub edges: Vec<EdgePiece>,
}

/// Vertex cones and edges of `P`.
///
/// A segment has two vertex cones of width `π` and two antiparallel edges; a
/// point has one full cone and no edges; the empty body has no pieces.
pub fn support_measure_pieces(p: &ConvexPolygon) -> SupportMeasurePieces {
    let vs = p.vertices();
    match vs.len() {
        0 => SupportMeasurePieces::default(),
        1 => SupportMeasurePieces {
            vertices: vec![VertexPiece {
                point: vs[0],
                start: 0.0,
                width: TAU,
            }],
            edges: Vec::new(),
        },
        n => {
            let edges: Vec<EdgePiece> = p
                .edges()
                .map(|(a, b)| EdgePiece {
                    a,
                    b,
                    normal: (b - a).perp_cw().angle(),
                })
                .collect();
            let vertices = (0..n)
                .map(|i| {
                    let e_in = vs[i] - vs[(i + n - 1) % n];
                    let e_out = vs[(i + 1) % n] - vs[i];
                    VertexPiece {
                        point: vs[i],
                        start: edges[(i + n - 1) % n].normal,
                        width: e_in.cross(e_out).atan2(e_in.dot(e_out)).abs(),
                    }
                })
                .collect();
            SupportMeasurePieces { vertices, edges }
        }
    }
}

/// Support function `h(P, u)` at the unit vector of angle `theta`.
pub fn support(p: &ConvexPolygon, theta: f64) -> Option<f64> {
    let u = Vec2::from_angle(theta);
    p.vertices().iter().map(|v| v.dot(u)).reduce(f64::max)
}

/// Steiner point `s(P) = (1/π) ∫ h(P,u) u dθ`, integrated exactly over the
/// vertex cones where `h` is linear.
pub fn steiner_point(p: &ConvexPolygon) -> Option<Vec2> {
    if p.is_empty() {
        return None;
    }
    let mut s = Vec2::ZERO;
    for piece in support_measure_pieces(p).vertices {
        let (t0, t1) = (piece.start, piece.start + piece.width);
        let cc = arc_moment(2, 0, t0, t1);
        let cs = arc_moment(1, 1, t0, t1);
        let ss = arc_moment(0, 2, t0, t1);
        let v = piece.point;
        s += Vec2::new(v.x * cc + v.y * cs, v.x * cs + v.y * ss);
    }
    Some(s * (1.0 / PI))
}

/// `∫_a^b h(P, u(ψ)) dψ` in closed form, for any `a ≤ b`.
pub fn support_integral(p: &ConvexPolygon, a: f64, b: f64) -> f64 {
    assert!(a <= b, "support_integral needs a ≤ b");
    let mut total = 0.0;
    for v in support_measure_pieces(p).vertices {
        // shift the cone so that copies start at or before `a`
        let mut lo = v.start - TAU * ((v.start - a) / TAU).ceil();
        while lo < b {
            let (s, e) = (lo.max(a), (lo + v.width).min(b));
            if e > s {
                let (s0, c0) = s.sin_cos();
                let (s1, c1) = e.sin_cos();
                total += v.point.x * (s1 - s0) + v.point.y * (c0 - c1);
            }
            lo += TAU;
        }
    }
    total
}

/// Centered support function `h*(P,u) = h(P,u) − ⟨s(P),u⟩`.
pub fn centered_support(p: &ConvexPolygon, theta: f64) -> Option<f64> {
    let s = steiner_point(p)?;
    Some(support(p, theta)? - s.dot(Vec2::from_angle(theta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::normalize_angle;
    use std::f64::consts::FRAC_PI_2;

    fn triangle() -> ConvexPolygon {
        ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 2.0]).unwrap()
    }

    #[test]
    fn square_cones() {
        let pcs = support_measure_pieces(&ConvexPolygon::square(1.0));
        assert_eq!(pcs.vertices.len(), 4);
        for v in &pcs.vertices {
            assert!((v.width - FRAC_PI_2).abs() < 1e-15);
        }
        // the cone at (0,0) runs from the left edge normal to the bottom one
        assert!((pcs.vertices[0].start - PI).abs() < 1e-15);
    }

    #[test]
    fn triangle_cones_are_exterior_angles() {
        let pcs = support_measure_pieces(&triangle());
        // interior angles at (0,0), (1,0), (0,2)
        let angles = [FRAC_PI_2, 2f64.atan(), 0.5f64.atan()];
        for (v, a) in pcs.vertices.iter().zip(angles) {
            assert!((v.width - (PI - a)).abs() < 1e-12);
        }
        let total: f64 = pcs.vertices.iter().map(|v| v.width).sum();
        assert!((total - TAU).abs() < 1e-12);
    }

    #[test]
    fn cones_tile_the_circle() {
        let p = ConvexPolygon::regular_ngon(7, 1.3).translate(Vec2::new(0.4, -2.0));
        let pcs = support_measure_pieces(&p);
        let n = pcs.vertices.len();
        for i in 0..n {
            let v = pcs.vertices[i];
            let next = pcs.vertices[(i + 1) % n];
            let end = normalize_angle(v.start + v.width);
            assert!((end - next.start).abs() < 1e-12 || (end - next.start).abs() > TAU - 1e-12);
            assert!((next.start - pcs.edges[i].normal).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_and_point_pieces() {
        let s = ConvexPolygon::segment(Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0));
        let pcs = support_measure_pieces(&s);
        assert_eq!(pcs.edges.len(), 2);
        assert!(pcs.vertices.iter().all(|v| (v.width - PI).abs() < 1e-15));
        let pt = support_measure_pieces(&ConvexPolygon::point(Vec2::new(1.0, 1.0)));
        assert_eq!(pt.vertices[0].width, TAU);
    }

    fn steiner_quadrature(p: &ConvexPolygon) -> Vec2 {
        let n = 40_000;
        let mut s = Vec2::ZERO;
        for i in 0..n {
            let t = (i as f64 + 0.5) * TAU / n as f64;
            s += Vec2::from_angle(t) * support(p, t).unwrap();
        }
        s * (TAU / n as f64 / PI)
    }

    #[test]
    fn steiner_point_of_unit_square() {
        let s = steiner_point(&ConvexPolygon::square(1.0)).unwrap();
        assert!(s.approx_eq(Vec2::new(0.5, 0.5), 1e-14));
        assert!(steiner_quadrature(&ConvexPolygon::square(1.0)).approx_eq(s, 1e-6));
    }

    #[test]
    fn steiner_point_is_exterior_angle_average() {
        // classical polygon formula: Σ v_i · ext_i / 2π
        let t = triangle();
        let pcs = support_measure_pieces(&t);
        let w = pcs
            .vertices
            .iter()
            .fold(Vec2::ZERO, |acc, v| acc + v.point * (v.width / TAU));
        assert!(steiner_point(&t).unwrap().approx_eq(w, 1e-12));
        assert!(steiner_quadrature(&t).approx_eq(w, 1e-6));
    }

    #[test]
    fn steiner_equivariance_and_degenerate() {
        let t = triangle();
        let shift = Vec2::new(2.0, -3.0);
        let a = steiner_point(&t.translate(shift)).unwrap();
        assert!(a.approx_eq(steiner_point(&t).unwrap() + shift, 1e-12));
        let seg = ConvexPolygon::segment(Vec2::new(1.0, 1.0), Vec2::new(3.0, 2.0));
        assert!(steiner_point(&seg).unwrap().approx_eq(Vec2::new(2.0, 1.5), 1e-12));
        assert!(steiner_point(&ConvexPolygon::empty()).is_none());
    }

    #[test]
    fn support_integral_matches_quadrature() {
        let t = triangle().translate(Vec2::new(0.2, -0.4));
        // a full turn gives the perimeter
        assert!((support_integral(&t, -1.0, TAU - 1.0) - t.perimeter()).abs() < 1e-12);
        for &(a, b) in &[(0.3, 1.1), (-2.0, 5.5), (1.0, 9.0)] {
            let n = 200_000;
            let h = (b - a) / n as f64;
            let q: f64 = (0..n).map(|i| support(&t, a + (i as f64 + 0.5) * h).unwrap()).sum::<f64>() * h;
            assert!((support_integral(&t, a, b) - q).abs() < 1e-8);
        }
    }

    #[test]
    fn disk_limit() {
        let b = ConvexPolygon::regular_ngon(256, 1.0);
        assert!(steiner_point(&b).unwrap().norm() < 1e-12);
        for k in 0..16 {
            let h = centered_support(&b, k as f64 * 0.4).unwrap();
            assert!((h - 1.0).abs() < 1e-3);
        }
    }
}
