use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::constants::{binomial, c_area, c_tensor};
use crate::error::{Error, Result};
use crate::geom2d::{arc_moment, support_measure_pieces, ConvexPolygon, SupportMeasurePieces, Vec2};

/// Symmetric tensor of rank `s` over the plane.
///
/// Coordinate `i` is the component with `s − i` copies of `e₁` and `i` copies
/// of `e₂`. The associated form is `T(x,…,x) = Σ C(s,i) T_i x₁^{s−i} x₂^i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymTensor {
    coords: Vec<f64>,
}

impl SymTensor {
    pub fn zero(rank: usize) -> Self {
        Self {
            coords: vec![0.0; rank + 1],
        }
    }

    pub fn scalar(v: f64) -> Self {
        Self { coords: vec![v] }
    }

    pub fn from_coords(coords: Vec<f64>) -> Self {
        assert!(!coords.is_empty(), "a tensor has at least one coordinate");
        Self { coords }
    }

    /// Rank-1 tensor of a vector.
    pub fn vector(v: Vec2) -> Self {
        Self {
            coords: vec![v.x, v.y],
        }
    }

    /// Metric tensor `Q`.
    pub fn metric() -> Self {
        Self {
            coords: vec![1.0, 0.0, 1.0],
        }
    }

    /// `Q^k` under the symmetric product.
    pub fn metric_power(k: usize) -> Self {
        (0..k).fold(Self::scalar(1.0), |acc, _| acc.sym_product(&Self::metric()))
    }

    /// `v^k = v ⊙ … ⊙ v`.
    pub fn power(v: Vec2, k: usize) -> Self {
        Self {
            coords: (0..=k)
                .map(|i| v.x.powi((k - i) as i32) * v.y.powi(i as i32))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Coefficients of the associated homogeneous polynomial.
    fn poly(&self) -> Vec<f64> {
        let s = self.rank() as i64;
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| c * binomial(s, i as i64))
            .collect()
    }

    fn from_poly(p: Vec<f64>) -> Self {
        let s = p.len() as i64 - 1;
        Self {
            coords: p
                .into_iter()
                .enumerate()
                .map(|(i, c)| c / binomial(s, i as i64))
                .collect(),
        }
    }

    /// Symmetric tensor product; on forms it is pointwise multiplication.
    pub fn sym_product(&self, o: &SymTensor) -> SymTensor {
        let (a, b) = (self.poly(), o.poly());
        let mut p = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                p[i + j] += x * y;
            }
        }
        Self::from_poly(p)
    }

    /// Contraction of two slots with the metric (trace), rank `s − 2`.
    pub fn trace(&self) -> SymTensor {
        assert!(self.rank() >= 2, "trace needs rank ≥ 2");
        Self {
            coords: (0..self.rank() - 1)
                .map(|i| self.coords[i] + self.coords[i + 2])
                .collect(),
        }
    }

    /// `T(x, …, x)`.
    pub fn eval(&self, x: Vec2) -> f64 {
        self.poly()
            .iter()
            .enumerate()
            .map(|(i, c)| c * x.x.powi((self.rank() - i) as i32) * x.y.powi(i as i32))
            .sum()
    }

    pub fn scale(&self, f: f64) -> SymTensor {
        Self {
            coords: self.coords.iter().map(|c| c * f).collect(),
        }
    }

    pub fn max_abs_diff(&self, o: &SymTensor) -> f64 {
        assert_eq!(self.rank(), o.rank());
        self.coords
            .iter()
            .zip(&o.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, o: &SymTensor, f: impl Fn(f64, f64) -> f64) -> SymTensor {
        assert_eq!(self.rank(), o.rank(), "rank mismatch");
        Self {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl Add for &SymTensor {
    type Output = SymTensor;
    fn add(self, o: &SymTensor) -> SymTensor {
        self.zip_with(o, |a, b| a + b)
    }
}

impl Sub for &SymTensor {
    type Output = SymTensor;
    fn sub(self, o: &SymTensor) -> SymTensor {
        self.zip_with(o, |a, b| a - b)
    }
}

impl Mul<f64> for &SymTensor {
    type Output = SymTensor;
    fn mul(self, f: f64) -> SymTensor {
        self.scale(f)
    }
}

/// `∫₀¹ (a + t d)^r dt` as a rank-`r` tensor.
fn edge_position_moment(a: Vec2, d: Vec2, r: usize) -> SymTensor {
    let mut acc = SymTensor::zero(r);
    for k in 0..=r {
        let w = binomial(r as i64, k as i64) / (k + 1) as f64;
        let term = SymTensor::power(a, r - k).sym_product(&SymTensor::power(d, k));
        acc = &acc + &(&term * w);
    }
    acc
}

/// `∫_{t0}^{t1} u(θ)^s dθ`.
fn arc_direction_moment(t0: f64, t1: f64, s: usize) -> SymTensor {
    SymTensor {
        coords: (0..=s)
            .map(|i| arc_moment((s - i) as u32, i as u32, t0, t1))
            .collect(),
    }
}

/// Minkowski tensor `Φ_j^{r,s}(K) = c_{2−j}^{r,s} ∫ x^r u^s Λ_j(K, d(x,u))`.
///
/// `Λ_1` is `½·` arc length on each edge times the edge normal, `Λ_0` is the
/// vertex cone measured by `dθ/2π`; both integrals are exact.
pub fn minkowski_tensor(k: &ConvexPolygon, j: usize, r: usize, s: usize) -> Result<SymTensor> {
    if j > 1 {
        return Err(Error::invalid("j", "Minkowski tensors are provided for j = 0, 1"));
    }
    tensor_from_pieces(&support_measure_pieces(k), j, r, s)
}

pub(crate) fn tensor_from_pieces(
    pieces: &SupportMeasurePieces,
    j: usize,
    r: usize,
    s: usize,
) -> Result<SymTensor> {
    let c = c_tensor(2 - j, r, s)? * c_area(2, j)?;
    if r == 0 {
        return Ok(direction_tensor(pieces, j, s, c));
    }
    Ok(moment_tensor(pieces, j, r, s, c))
}

fn moment_tensor(pieces: &SupportMeasurePieces, j: usize, r: usize, s: usize, c: f64) -> SymTensor {
    let mut acc = SymTensor::zero(r + s);
    if j == 1 {
        for e in &pieces.edges {
            let x = edge_position_moment(e.a, e.b - e.a, r);
            let u = SymTensor::power(Vec2::from_angle(e.normal), s);
            acc = &acc + &(&x.sym_product(&u) * e.length());
        }
    } else {
        for v in &pieces.vertices {
            let x = SymTensor::power(v.point, r);
            let u = arc_direction_moment(v.start, v.start + v.width, s);
            acc = &acc + &x.sym_product(&u);
        }
    }
    &acc * c
}

/// Translation-invariant case `r = 0` without intermediate tensors.
fn direction_tensor(pieces: &SupportMeasurePieces, j: usize, s: usize, c: f64) -> SymTensor {
    let mut coords = vec![0.0; s + 1];
    if j == 1 {
        for e in &pieces.edges {
            let (sn, cs) = e.normal.sin_cos();
            let len = e.length();
            // coordinate i is cos^{s−i} sin^i
            let mut sp = 1.0;
            for (i, slot) in coords.iter_mut().enumerate() {
                *slot += len * cs.powi((s - i) as i32) * sp;
                sp *= sn;
            }
        }
    } else if !pieces.vertices.is_empty() {
        // the normal cones tile the circle, so only V_0 matters
        for (i, slot) in coords.iter_mut().enumerate() {
            *slot = arc_moment((s - i) as u32, i as u32, 0.0, std::f64::consts::TAU);
        }
    }
    SymTensor { coords: coords.into_iter().map(|x| x * c).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::intersect;

    #[test]
    fn direction_fast_path_matches_general() {
        let bodies = [
            ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 2.0]).unwrap(),
            ConvexPolygon::regular_ngon(9, 0.7).translate(Vec2::new(0.3, -1.0)),
            ConvexPolygon::segment(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.5)),
            ConvexPolygon::point(Vec2::new(2.0, 1.0)),
        ];
        for b in &bodies {
            let pcs = support_measure_pieces(b);
            for j in 0..=1 {
                for s in 0..=6 {
                    let fast = direction_tensor(&pcs, j, s, 1.0);
                    let slow = moment_tensor(&pcs, j, 0, s, 1.0);
                    assert!(fast.max_abs_diff(&slow) < 1e-12, "j={j} s={s}");
                }
            }
        }
    }
    use std::f64::consts::PI;

    fn triangle() -> ConvexPolygon {
        ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 2.0]).unwrap()
    }

    #[test]
    fn metric_powers() {
        assert_eq!(SymTensor::metric_power(1).coords(), &[1.0, 0.0, 1.0]);
        let q2 = SymTensor::metric_power(2);
        let want = [1.0, 0.0, 1.0 / 3.0, 0.0, 1.0];
        assert!(q2.coords().iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15));
        // Q^k(x,…,x) = |x|^{2k}
        let x = Vec2::new(0.3, -1.2);
        assert!((SymTensor::metric_power(3).eval(x) - x.norm_sq().powi(3)).abs() < 1e-12);
        // tr Q = 2 in the plane
        assert_eq!(SymTensor::metric().trace().coords(), &[2.0]);
    }

    #[test]
    fn product_is_pointwise_on_forms() {
        let a = SymTensor::from_coords(vec![0.5, -1.0, 2.0]);
        let b = SymTensor::from_coords(vec![3.0, 0.25]);
        let x = Vec2::new(-0.7, 1.9);
        assert!((a.sym_product(&b).eval(x) - a.eval(x) * b.eval(x)).abs() < 1e-12);
    }

    #[test]
    fn scalar_tensors_are_intrinsic_volumes() {
        for p in [ConvexPolygon::square(1.0), triangle(), ConvexPolygon::regular_ngon(9, 0.7)] {
            let iv = p.intrinsic_volumes();
            for (j, v) in iv.iter().enumerate().take(2) {
                let t = minkowski_tensor(&p, j, 0, 0).unwrap();
                assert!((t.coords()[0] - v).abs() < 1e-12);
            }
        }
        assert_eq!(minkowski_tensor(&ConvexPolygon::square(1.0), 1, 0, 0).unwrap().coords(), &[2.0]);
    }

    #[test]
    fn disk_second_moment() {
        let b = ConvexPolygon::regular_ngon(256, 1.0);
        let t = minkowski_tensor(&b, 1, 0, 2).unwrap();
        assert!(t.max_abs_diff(&SymTensor::metric().scale(0.125)) < 1e-3);
    }

    #[test]
    fn first_moment_vanishes() {
        for p in [triangle(), ConvexPolygon::rect(2.0, 0.3).translate(Vec2::new(4.0, 1.0))] {
            let t = minkowski_tensor(&p, 1, 0, 1).unwrap();
            assert!(t.coords().iter().all(|c| c.abs() < 1e-12));
        }
    }

    #[test]
    fn unit_square_normal_atoms() {
        // direct enumeration: ½·c_1^{0,2}·Σ_edges length·n⊗n with n ∈ {±e1, ±e2}
        let t = minkowski_tensor(&ConvexPolygon::square(1.0), 1, 0, 2).unwrap();
        let c = 0.5 * c_tensor(1, 0, 2).unwrap();
        assert!((t.coords()[0] - 2.0 * c).abs() < 1e-15);
        assert!(t.coords()[1].abs() < 1e-15);
        assert!((t.coords()[2] - 2.0 * c).abs() < 1e-15);
        assert!((c - 1.0 / (8.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn translation_covariance() {
        let p = triangle();
        let t = Vec2::new(2.0, -3.0);
        for j in 0..2 {
            for s in 0..4 {
                let lhs = minkowski_tensor(&p.translate(t), j, 1, s).unwrap();
                let rhs = &minkowski_tensor(&p, j, 1, s).unwrap()
                    + &SymTensor::vector(t).sym_product(&minkowski_tensor(&p, j, 0, s).unwrap());
                assert!(lhs.max_abs_diff(&rhs) < 1e-12, "j={j} s={s}");
            }
        }
    }

    #[test]
    fn valuation_on_wedge() {
        let k = ConvexPolygon::rect_at(Vec2::new(0.0, 0.0), Vec2::new(2.0, 1.0));
        let m = ConvexPolygon::rect_at(Vec2::new(1.0, 0.0), Vec2::new(3.0, 1.0));
        let u = ConvexPolygon::rect_at(Vec2::new(0.0, 0.0), Vec2::new(3.0, 1.0));
        let i = intersect(&k, &m);
        for j in 0..2 {
            for (r, s) in [(0, 2), (1, 1), (2, 3), (0, 4)] {
                let f = |p: &ConvexPolygon| minkowski_tensor(p, j, r, s).unwrap();
                let lhs = &f(&u) + &f(&i);
                let rhs = &f(&k) + &f(&m);
                assert!(lhs.max_abs_diff(&rhs) < 1e-10);
            }
        }
    }

    #[test]
    fn j0_is_isotropic_constant() {
        let a = minkowski_tensor(&triangle(), 0, 0, 2).unwrap();
        let b = minkowski_tensor(&ConvexPolygon::point(Vec2::new(1.0, 1.0)), 0, 0, 2).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14);
        // α_{2,0,2} Q V_0
        assert!(a.max_abs_diff(&SymTensor::metric().scale(1.0 / (4.0 * PI))) < 1e-14);
    }
}
