use super::Realization;
use crate::error::{Error, Result};
use crate::geom2d::{intersect, BBox, ConvexPolygon, Window};
use crate::valuations::ValuationSet;

/// Default cap on visited inclusion–exclusion nodes.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

struct Dfs<'a, F> {
    bodies: &'a [ConvexPolygon],
    boxes: Vec<BBox>,
    phi: &'a F,
    acc: Vec<f64>,
    buf: Vec<f64>,
    nodes: usize,
    cap: usize,
}

impl<F: Fn(&ConvexPolygon, &mut Vec<f64>)> Dfs<'_, F> {
    fn visit(&mut self, start: usize, cur: &ConvexPolygon, sign: f64) -> Result<()> {
        let cur_box = cur.bbox().expect("running intersection is nonempty");
        for i in start..self.bodies.len() {
            if !self.boxes[i].overlaps(&cur_box) {
                continue;
            }
            let next = intersect(cur, &self.bodies[i]);
            if next.is_empty() {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::NodeCapExceeded { cap: self.cap });
            }
            self.buf.clear();
            (self.phi)(&next, &mut self.buf);
            for (a, v) in self.acc.iter_mut().zip(&self.buf) {
                *a += sign * v;
            }
            self.visit(i + 1, &next, -sign)?;
        }
        Ok(())
    }
}

/// `φ(K_0 ∩ ⋃ bodies)` by inclusion–exclusion, extending a subset only while
/// its running intersection with `K_0` is nonempty.
pub fn union_valuation(
    bodies: &[ConvexPolygon],
    k0: &ConvexPolygon,
    phi: &ValuationSet,
    cap: usize,
) -> Result<Vec<f64>> {
    union_functional(bodies, k0, phi.dim(), &|b, out| phi.eval_into(b, out), cap)
}

/// [`union_valuation`] for any additive functional with `dim` outputs that
/// appends its value on a convex body to the buffer.
pub fn union_functional<F>(
    bodies: &[ConvexPolygon],
    k0: &ConvexPolygon,
    dim: usize,
    phi: &F,
    cap: usize,
) -> Result<Vec<f64>>
where
    F: Fn(&ConvexPolygon, &mut Vec<f64>),
{
    let mut dfs = Dfs {
        bodies,
        boxes: bodies.iter().map(|b| b.bbox().expect("grains are nonempty")).collect(),
        phi,
        acc: vec![0.0; dim],
        buf: Vec::with_capacity(dim),
        nodes: 0,
        cap,
    };
    if !k0.is_empty() {
        dfs.visit(0, k0, 1.0)?;
    }
    Ok(dfs.acc)
}

/// Inclusion–exclusion over all `2^n − 1` subsets, without pruning.
pub fn union_valuation_exhaustive(
    bodies: &[ConvexPolygon],
    k0: &ConvexPolygon,
    phi: &ValuationSet,
) -> Vec<f64> {
    assert!(bodies.len() <= 20, "exhaustive enumeration is for small fixtures");
    let mut acc = vec![0.0; phi.dim()];
    for mask in 1u32..(1 << bodies.len()) {
        let mut cur = k0.clone();
        for (i, b) in bodies.iter().enumerate() {
            if mask & (1 << i) != 0 {
                cur = intersect(&cur, b);
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        for (a, v) in acc.iter_mut().zip(phi.eval(&cur)) {
            *a += sign * v;
        }
    }
    acc
}

/// `φ(Z ∩ K_0)` for a realization.
pub fn eval_union(real: &Realization, k0: &ConvexPolygon, phi: &ValuationSet) -> Result<Vec<f64>> {
    union_valuation(&real.placed(), k0, phi, DEFAULT_NODE_CAP)
}

/// Half-open cell estimator `φ(Z ∩ C) − φ(Z ∩ ∂⁺C)`.
///
/// `∂⁺C` is split into its upper-right edges and their shared corners, and
/// evaluated by inclusion–exclusion over those pieces.
pub fn eval_boundary_corrected(
    real: &Realization,
    cell: &Window,
    phi: &ValuationSet,
) -> Result<Vec<f64>> {
    boundary_corrected_functional(real, cell, phi.dim(), &|b, out| phi.eval_into(b, out))
}

/// [`eval_boundary_corrected`] for a general additive functional.
pub fn boundary_corrected_functional<F>(
    real: &Realization,
    cell: &Window,
    dim: usize,
    phi: &F,
) -> Result<Vec<f64>>
where
    F: Fn(&ConvexPolygon, &mut Vec<f64>),
{
    let r = real.grains.iter().map(|g| g.shape.max_norm()).fold(0.0, f64::max);
    if !real.window.contains_with_margin(cell.polygon(), r) {
        return Err(Error::MarginViolated { margin: r });
    }
    let c = cell.polygon();
    let hitting: Vec<ConvexPolygon> = real
        .placed()
        .into_iter()
        .filter(|g| !intersect(c, g).is_empty())
        .collect();
    let mut out = union_functional(&hitting, c, dim, phi, DEFAULT_NODE_CAP)?;
    let boundary = cell.upper_right_boundary();
    for (pieces, sign) in [(&boundary.edges, -1.0), (&boundary.corners, 1.0)] {
        for piece in pieces {
            let v = union_functional(&hitting, piece, dim, phi, DEFAULT_NODE_CAP)?;
            for (o, x) in out.iter_mut().zip(v) {
                *o += sign * x;
            }
        }
    }
    Ok(out)
}
