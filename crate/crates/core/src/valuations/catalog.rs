use std::cell::OnceCell;
use std::f64::consts::{SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use super::harmonic::HarmonicIndex;
use super::tensor::tensor_from_pieces;
use crate::error::{Error, Result};
use crate::geom2d::{
    area_measure, steiner_point, support, support_measure_pieces, ConvexPolygon, SphereMeasure,
    SupportMeasurePieces, Vec2,
};

/// Cap on `r + s` for tensor valuations.
pub const MAX_TENSOR_RANK: usize = 8;
/// Cap on harmonic degrees.
pub const MAX_HARMONIC_DEGREE: u32 = 64;

/// A valuation from the catalog, evaluated as a vector of reals.
///
/// Tensors contribute their `r + s + 1` coordinates, centered support
/// functions one value per sampling angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Valuation {
    IntrinsicVolume { j: usize },
    Harmonic { j: usize, l: u32, p: u8 },
    Tensor { j: usize, r: usize, s: usize },
    CenteredSupport { angles: Vec<f64> },
}

/// Geometric data of one body shared by all catalog valuations, computed
/// on first use.
pub struct Prepared<'a> {
    pub body: &'a ConvexPolygon,
    pub iv: [f64; 3],
    l_max: u32,
    s1: OnceCell<SphereMeasure>,
    pieces: OnceCell<SupportMeasurePieces>,
    steiner: OnceCell<Option<Vec2>>,
    fourier: OnceCell<Vec<(f64, f64)>>,
}

impl<'a> Prepared<'a> {
    pub fn new(body: &'a ConvexPolygon) -> Self {
        Self::with_degree(body, 0)
    }

    /// Prepared body whose Fourier table covers degrees `≤ l_max`.
    pub fn with_degree(body: &'a ConvexPolygon, l_max: u32) -> Self {
        Self {
            body,
            iv: body.intrinsic_volumes(),
            l_max,
            s1: OnceCell::new(),
            pieces: OnceCell::new(),
            steiner: OnceCell::new(),
            fourier: OnceCell::new(),
        }
    }

    pub fn s1(&self) -> &SphereMeasure {
        self.s1.get_or_init(|| area_measure(self.body, 1))
    }

    pub fn pieces(&self) -> &SupportMeasurePieces {
        self.pieces.get_or_init(|| support_measure_pieces(self.body))
    }

    pub fn steiner(&self) -> Option<Vec2> {
        *self.steiner.get_or_init(|| steiner_point(self.body))
    }

    /// `(∫cos lθ, ∫sin lθ)` of `S_1`.
    pub fn fourier(&self, l: u32) -> (f64, f64) {
        if l > self.l_max {
            return self.s1().fourier(l);
        }
        self.fourier.get_or_init(|| self.s1().fourier_table(self.l_max))[l as usize]
    }
}

impl Valuation {
    pub fn iv(j: usize) -> Self {
        Valuation::IntrinsicVolume { j }
    }

    /// Centered support function at `n` equally spaced angles.
    pub fn support_grid(n: usize) -> Self {
        Valuation::CenteredSupport {
            angles: (0..n).map(|k| TAU * k as f64 / n as f64).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Valuation::IntrinsicVolume { j } if j > 2 => {
                Err(Error::invalid("j", "intrinsic volumes have j ≤ 2 in the plane"))
            }
            Valuation::Harmonic { j, l, p } => {
                if j > 1 {
                    return Err(Error::invalid("j", "harmonic intrinsic volumes need j ≤ 1"));
                }
                if l > MAX_HARMONIC_DEGREE {
                    return Err(Error::invalid("l", format!("degree cap is {MAX_HARMONIC_DEGREE}")));
                }
                HarmonicIndex::new(l, p).map(|_| ())
            }
            Valuation::Tensor { j, r, s } => {
                if j > 1 {
                    return Err(Error::invalid("j", "Minkowski tensors need j ≤ 1"));
                }
                if r + s > MAX_TENSOR_RANK {
                    return Err(Error::invalid("s", format!("r + s is capped at {MAX_TENSOR_RANK}")));
                }
                Ok(())
            }
            Valuation::CenteredSupport { ref angles } if angles.is_empty() => {
                Err(Error::invalid("angles", "at least one angle is required"))
            }
            _ => Ok(()),
        }
    }

    /// Number of reals produced by [`Valuation::eval`].
    pub fn dim(&self) -> usize {
        match self {
            Valuation::Tensor { r, s, .. } => r + s + 1,
            Valuation::CenteredSupport { angles } => angles.len(),
            _ => 1,
        }
    }

    /// Homogeneity degree for translation-invariant members; `None` for
    /// translation-covariant tensors (`r ≥ 1`).
    pub fn degree(&self) -> Option<usize> {
        match *self {
            Valuation::IntrinsicVolume { j }
            | Valuation::Harmonic { j, .. }
            | Valuation::Tensor { j, r: 0, .. } => Some(j),
            Valuation::Tensor { .. } => None,
            Valuation::CenteredSupport { .. } => Some(1),
        }
    }

    /// Short channel labels, one per output coordinate.
    pub fn labels(&self) -> Vec<String> {
        match self {
            Valuation::IntrinsicVolume { j } => vec![format!("v{j}")],
            Valuation::Harmonic { j, l, p } => vec![format!("v{j}_l{l}_p{p}")],
            Valuation::Tensor { j, r, s } => {
                (0..=r + s).map(|i| format!("phi{j}_r{r}_s{s}_{i}")).collect()
            }
            Valuation::CenteredSupport { angles } => {
                (0..angles.len()).map(|i| format!("hstar_{i}")).collect()
            }
        }
    }

    pub fn eval(&self, body: &ConvexPolygon) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        self.eval_into(&Prepared::new(body), &mut out);
        out
    }

    /// Append the value on a prepared body to `out`.
    pub fn eval_into(&self, p: &Prepared<'_>, out: &mut Vec<f64>) {
        match self {
            Valuation::IntrinsicVolume { j } => out.push(p.iv[*j]),
            Valuation::Harmonic { j, l, p: q } => out.push(if p.body.is_empty() {
                0.0
            } else if *j == 0 {
                if *l == 0 { 1.0 } else { 0.0 }
            } else {
                let (c, s) = p.fourier(*l);
                match (*l, *q) {
                    (0, _) => 0.5 * c,
                    (_, 1) => 0.5 * SQRT_2 * c,
                    _ => 0.5 * SQRT_2 * s,
                }
            }),
            Valuation::Tensor { j, r, s } => out.extend_from_slice(
                tensor_from_pieces(p.pieces(), *j, *r, *s)
                    .expect("validated tensor index")
                    .coords(),
            ),
            Valuation::CenteredSupport { angles } => match p.steiner() {
                None => out.extend(angles.iter().map(|_| 0.0)),
                Some(st) => out.extend(angles.iter().map(|&a| {
                    support(p.body, a).expect("nonempty") - st.dot(Vec2::from_angle(a))
                })),
            },
        }
    }
}

/// An ordered list of valuations evaluated together into one flat vector.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValuationSet(pub Vec<Valuation>);

impl ValuationSet {
    pub fn new(items: Vec<Valuation>) -> Result<Self> {
        for v in &items {
            v.validate()?;
        }
        Ok(Self(items))
    }

    pub fn single(v: Valuation) -> Result<Self> {
        Self::new(vec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(Valuation::dim).sum()
    }

    pub fn labels(&self) -> Vec<String> {
        self.0.iter().flat_map(Valuation::labels).collect()
    }

    pub fn eval(&self, body: &ConvexPolygon) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        self.eval_into(body, &mut out);
        out
    }

    /// Largest harmonic degree among the members.
    pub fn harmonic_degree(&self) -> u32 {
        self.0
            .iter()
            .map(|v| match v {
                Valuation::Harmonic { l, .. } => *l,
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn eval_into(&self, body: &ConvexPolygon, out: &mut Vec<f64>) {
        let p = Prepared::with_degree(body, self.harmonic_degree());
        for v in &self.0 {
            v.eval_into(&p, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom2d::{intersect, minkowski_sum};
    use crate::valuations::{harmonic_iv, minkowski_tensor};

    fn catalog() -> ValuationSet {
        let mut v = vec![Valuation::iv(0), Valuation::iv(1), Valuation::iv(2)];
        for l in 0..5 {
            for p in 1..=2u8 {
                if l > 0 || p == 1 {
                    v.push(Valuation::Harmonic { j: 1, l, p });
                    v.push(Valuation::Harmonic { j: 0, l, p });
                }
            }
        }
        for j in 0..2 {
            for (r, s) in [(0, 0), (0, 2), (1, 1), (2, 2), (0, 3)] {
                v.push(Valuation::Tensor { j, r, s });
            }
        }
        v.push(Valuation::support_grid(16));
        ValuationSet::new(v).unwrap()
    }

    #[test]
    fn dims_match_labels() {
        let c = catalog();
        assert_eq!(c.labels().len(), c.dim());
        assert_eq!(c.eval(&ConvexPolygon::square(1.0)).len(), c.dim());
    }

    #[test]
    fn agrees_with_direct_functions() {
        let t = ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 2.0]).unwrap();
        let h = Valuation::Harmonic { j: 1, l: 3, p: 2 }.eval(&t)[0];
        assert_eq!(h, harmonic_iv(&t, 1, HarmonicIndex::new(3, 2).unwrap()).unwrap());
        let ten = Valuation::Tensor { j: 0, r: 1, s: 2 }.eval(&t);
        assert_eq!(ten, minkowski_tensor(&t, 0, 1, 2).unwrap().coords());
    }

    #[test]
    fn wedge_additivity() {
        let rects = [
            ((0.0, 0.0, 2.0, 1.0), (1.0, 0.0, 3.0, 1.0)),
            ((0.0, 0.0, 1.0, 2.0), (0.0, 0.5, 1.0, 3.0)),
            ((-1.0, 2.0, 0.5, 2.5), (0.5, 2.0, 1.5, 2.5)),
        ];
        let c = catalog();
        for ((a, b, cc, d), (e, f, g, h)) in rects {
            let k = ConvexPolygon::rect_at(Vec2::new(a, b), Vec2::new(cc, d));
            let m = ConvexPolygon::rect_at(Vec2::new(e, f), Vec2::new(g, h));
            let u = ConvexPolygon::rect_at(Vec2::new(a.min(e), b.min(f)), Vec2::new(cc.max(g), d.max(h)));
            let i = intersect(&k, &m);
            let (fu, fi, fk, fm) = (c.eval(&u), c.eval(&i), c.eval(&k), c.eval(&m));
            for idx in 0..c.dim() {
                assert!((fu[idx] + fi[idx] - fk[idx] - fm[idx]).abs() < 1e-10, "{}", c.labels()[idx]);
            }
        }
    }

    #[test]
    fn centered_support_is_additive() {
        let k = ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 2.0]).unwrap();
        let m = ConvexPolygon::regular_ngon(5, 0.6).translate(Vec2::new(3.0, 1.0));
        let g = Valuation::support_grid(64);
        let sum = g.eval(&minkowski_sum(&k, &m));
        let (a, b) = (g.eval(&k), g.eval(&m));
        for i in 0..64 {
            assert!((sum[i] - a[i] - b[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn homogeneity() {
        let k = ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.3, 0.2, 2.0]).unwrap();
        for alpha in [0.5, 3.0] {
            let ka = k.scale(alpha);
            for j in 0..2usize {
                for v in [
                    Valuation::Harmonic { j, l: 3, p: 1 },
                    Valuation::Tensor { j, r: 0, s: 2 },
                    Valuation::iv(j),
                ] {
                    let (x, y) = (v.eval(&k), v.eval(&ka));
                    for (a, b) in x.iter().zip(&y) {
                        assert!((b - alpha.powi(j as i32) * a).abs() < 1e-12 * a.abs().max(1.0));
                    }
                }
            }
            for j in 0..3usize {
                let (x, y) = (k.intrinsic_volumes()[j], ka.intrinsic_volumes()[j]);
                assert!((y - alpha.powi(j as i32) * x).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn validation() {
        assert!(Valuation::iv(3).validate().is_err());
        assert!(Valuation::Tensor { j: 1, r: 5, s: 4 }.validate().is_err());
        assert!(Valuation::Harmonic { j: 1, l: 0, p: 2 }.validate().is_err());
        assert_eq!(Valuation::Tensor { j: 1, r: 1, s: 0 }.degree(), None);
    }

    #[test]
    fn empty_body_is_zero() {
        let c = catalog();
        assert!(c.eval(&ConvexPolygon::empty()).iter().all(|&x| x == 0.0));
    }
}
