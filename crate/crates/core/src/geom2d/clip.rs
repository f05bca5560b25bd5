use super::{ConvexPolygon, Vec2, TOL};

/// Exact intersection of two convex bodies.
///
/// Full-dimensional operands are intersected by clipping one against the
/// half-planes of the other's edges; lower-dimensional results keep their
/// dimension (touching squares meet in a segment, corners in a point).
pub fn intersect(p: &ConvexPolygon, q: &ConvexPolygon) -> ConvexPolygon {
    let (Some(bp), Some(bq)) = (p.bbox(), q.bbox()) else {
        return ConvexPolygon::empty();
    };
    if !bp.overlaps(&bq) {
        return ConvexPolygon::empty();
    }
    match (p.dim(), q.dim()) {
        (Some(2), _) => clip_by(q.vertices(), p),
        (_, Some(2)) => clip_by(p.vertices(), q),
        _ => intersect_degenerate(p, q),
    }
}

#[inline]
fn signed_dist(a: Vec2, dir: Vec2, inv_len: f64, v: Vec2) -> f64 {
    dir.cross(v - a) * inv_len
}

fn bounds(vs: &[Vec2]) -> (Vec2, Vec2) {
    vs.iter().fold((vs[0], vs[0]), |(lo, hi), v| {
        (Vec2::new(lo.x.min(v.x), lo.y.min(v.y)), Vec2::new(hi.x.max(v.x), hi.y.max(v.y)))
    })
}

/// Clip `subject` (any vertex cycle) against the CCW full-dimensional `clip`.
///
/// Clip edges whose inner half-plane contains the bounding box of the current
/// subject are skipped without touching its vertices.
fn clip_by(subject: &[Vec2], clip: &ConvexPolygon) -> ConvexPolygon {
    let mut cur: Vec<Vec2> = subject.to_vec();
    let mut next: Vec<Vec2> = Vec::with_capacity(cur.len() + 4);
    let mut dists: Vec<f64> = Vec::with_capacity(cur.len() + 4);
    let (mut lo, mut hi) = bounds(&cur);
    for (a, b) in clip.edges() {
        if cur.is_empty() {
            break;
        }
        let dir = b - a;
        let inv_len = 1.0 / dir.norm();
        // box corner with the smallest signed distance
        let worst = Vec2::new(
            if dir.y > 0.0 { hi.x } else { lo.x },
            if dir.x > 0.0 { lo.y } else { hi.y },
        );
        if signed_dist(a, dir, inv_len, worst) >= -TOL {
            continue;
        }
        dists.clear();
        dists.extend(cur.iter().map(|&v| signed_dist(a, dir, inv_len, v)));
        if dists.iter().all(|&d| d >= -TOL) {
            continue;
        }
        if dists.iter().all(|&d| d < -TOL) {
            cur.clear();
            break;
        }
        next.clear();
        let n = cur.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let (vi, vj) = (cur[i], cur[j]);
            let (di, dj) = (dists[i], dists[j]);
            let in_i = di >= -TOL;
            let in_j = dj >= -TOL;
            if in_i {
                next.push(vi);
            }
            if in_i != in_j {
                let t = di / (di - dj);
                next.push(vi + (vj - vi) * t);
            }
        }
        std::mem::swap(&mut cur, &mut next);
        (lo, hi) = bounds(&cur);
    }
    ConvexPolygon::cleanup(cur)
}

fn intersect_degenerate(p: &ConvexPolygon, q: &ConvexPolygon) -> ConvexPolygon {
    match (p.vertices(), q.vertices()) {
        ([a], _) => {
            if q.contains(*a) {
                ConvexPolygon::point(*a)
            } else {
                ConvexPolygon::empty()
            }
        }
        (_, [b]) => {
            if p.contains(*b) {
                ConvexPolygon::point(*b)
            } else {
                ConvexPolygon::empty()
            }
        }
        ([a0, a1], [b0, b1]) => segment_segment(*a0, *a1, *b0, *b1),
        _ => unreachable!("full-dimensional operands are handled by clipping"),
    }
}

fn segment_segment(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> ConvexPolygon {
    let da = a1 - a0;
    let db = b1 - b0;
    let la = da.norm();
    let denom = da.cross(db);
    if denom.abs() <= TOL * la * db.norm() {
        // parallel
        if (da.cross(b0 - a0) / la).abs() > TOL {
            return ConvexPolygon::empty();
        }
        let u = da * (1.0 / la);
        let (mut s0, mut s1) = ((b0 - a0).dot(u), (b1 - a0).dot(u));
        if s0 > s1 {
            std::mem::swap(&mut s0, &mut s1);
        }
        let lo = s0.max(0.0);
        let hi = s1.min(la);
        if lo > hi + TOL {
            return ConvexPolygon::empty();
        }
        return ConvexPolygon::segment(a0 + u * lo, a0 + u * hi.max(lo));
    }
    let t = (b0 - a0).cross(db) / denom;
    let x = a0 + da * t;
    let seg_a = ConvexPolygon::segment(a0, a1);
    let seg_b = ConvexPolygon::segment(b0, b1);
    if seg_a.contains(x) && seg_b.contains(x) {
        ConvexPolygon::point(x)
    } else {
        ConvexPolygon::empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ConvexPolygon {
        ConvexPolygon::square(1.0)
    }

    #[test]
    fn overlapping_squares() {
        let r = intersect(&unit(), &unit().translate(Vec2::new(0.5, 0.5)));
        assert_eq!(r.dim(), Some(2));
        assert!((r.area() - 0.25).abs() < 1e-15);
        assert_eq!(r.bbox().unwrap().min, Vec2::new(0.5, 0.5));
    }

    #[test]
    fn disjoint_squares() {
        assert!(intersect(&unit(), &unit().translate(Vec2::new(2.0, 0.0))).is_empty());
    }

    #[test]
    fn shared_edge_is_segment() {
        let r = intersect(&unit(), &unit().translate(Vec2::new(1.0, 0.0)));
        assert_eq!(r.dim(), Some(1));
        assert_eq!(r.intrinsic_volumes(), [1.0, 1.0, 0.0]);
        assert!(r.vertices().iter().all(|v| (v.x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn shared_corner_is_point() {
        let r = intersect(&unit(), &unit().translate(Vec2::new(1.0, 1.0)));
        assert_eq!(r.dim(), Some(0));
        assert!(r.vertices()[0].approx_eq(Vec2::new(1.0, 1.0), 1e-12));
    }

    #[test]
    fn segment_through_square() {
        let s = ConvexPolygon::segment(Vec2::new(-1.0, 0.5), Vec2::new(2.0, 0.5));
        let r = intersect(&s, &unit());
        assert_eq!(r.dim(), Some(1));
        assert!((r.intrinsic_volumes()[1] - 1.0).abs() < 1e-12);
        assert_eq!(intersect(&unit(), &s), r);
    }

    #[test]
    fn crossing_and_collinear_segments() {
        let a = ConvexPolygon::segment(Vec2::new(0.0, 0.0), Vec2::new(2.0, 2.0));
        let b = ConvexPolygon::segment(Vec2::new(0.0, 2.0), Vec2::new(2.0, 0.0));
        let x = intersect(&a, &b);
        assert_eq!(x.dim(), Some(0));
        assert!(x.vertices()[0].approx_eq(Vec2::new(1.0, 1.0), 1e-12));
        let c = ConvexPolygon::segment(Vec2::new(1.0, 1.0), Vec2::new(3.0, 3.0));
        let y = intersect(&a, &c);
        assert_eq!(y.dim(), Some(1));
        assert!((y.intrinsic_volumes()[1] - 2f64.sqrt()).abs() < 1e-12);
        let d = ConvexPolygon::segment(Vec2::new(0.0, 1.0), Vec2::new(2.0, 3.0));
        assert!(intersect(&a, &d).is_empty());
    }

    #[test]
    fn point_cases() {
        let p = ConvexPolygon::point(Vec2::new(0.5, 0.0));
        assert_eq!(intersect(&p, &unit()).dim(), Some(0));
        assert!(intersect(&p, &ConvexPolygon::point(Vec2::new(0.5, 1e-3))).is_empty());
    }
}
