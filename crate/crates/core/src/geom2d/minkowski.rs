use super::{ConvexPolygon, Vec2};

/// Point reflection `-P`.
pub fn reflect(p: &ConvexPolygon) -> ConvexPolygon {
    // -I has determinant 1, so counterclockwise order is preserved
    ConvexPolygon::cleanup(p.vertices().iter().map(|&v| -v).collect())
}

fn bottom_index(vs: &[Vec2]) -> usize {
    let mut best = 0;
    for (i, v) in vs.iter().enumerate() {
        let b = vs[best];
        if v.y < b.y || (v.y == b.y && v.x < b.x) {
            best = i;
        }
    }
    best
}

/// Edge vectors of the closed cycle starting at the bottom-most vertex, so
/// that their polar angles increase through `[0, 2π)`.
fn edge_cycle(p: &ConvexPolygon) -> (Vec2, Vec<(f64, Vec2)>) {
    let vs = p.vertices();
    let start = bottom_index(vs);
    let n = vs.len();
    let edges = (0..n)
        .map(|k| {
            let a = vs[(start + k) % n];
            let b = vs[(start + k + 1) % n];
            let e = b - a;
            (e.angle(), e)
        })
        .collect();
    (vs[start], edges)
}

/// Minkowski sum `P ⊕ Q` by merging edge sequences in normal-angle order.
pub fn minkowski_sum(p: &ConvexPolygon, q: &ConvexPolygon) -> ConvexPolygon {
    if p.is_empty() || q.is_empty() {
        return ConvexPolygon::empty();
    }
    if let [t] = q.vertices() {
        return p.translate(*t);
    }
    if let [t] = p.vertices() {
        return q.translate(*t);
    }
    let (p0, ep) = edge_cycle(p);
    let (q0, eq) = edge_cycle(q);
    let mut cur = p0 + q0;
    let mut out = Vec::with_capacity(ep.len() + eq.len());
    let (mut i, mut j) = (0, 0);
    while i < ep.len() || j < eq.len() {
        out.push(cur);
        let take_p = j >= eq.len() || (i < ep.len() && ep[i].0 <= eq[j].0);
        if take_p {
            cur += ep[i].1;
            i += 1;
        } else {
            cur += eq[j].1;
            j += 1;
        }
    }
    ConvexPolygon::cleanup(out)
}
