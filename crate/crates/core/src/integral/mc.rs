use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom2d::{intersect, minkowski_sum, reflect, ConvexPolygon, Vec2};
use crate::rng::{label, stream};
use crate::stats::RunningStats;
use crate::valuations::{constants::c_upper, Valuation};

/// Monte Carlo estimate of an integral, one entry per valuation coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: usize,
}

impl McEstimate {
    fn exact_zero(dim: usize, samples: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            stderr: vec![0.0; dim],
            samples,
        }
    }
}

/// Number of independent RNG streams a sample budget is split into. Fixed,
/// so that results do not depend on the worker count.
const CHUNKS: usize = 64;

/// Uniform sampler on a convex polygon by fan triangulation.
pub(crate) struct PolygonSampler {
    apex: Vec2,
    tris: Vec<(Vec2, Vec2)>,
    cum: Vec<f64>,
}

impl PolygonSampler {
    pub(crate) fn new(p: &ConvexPolygon) -> Option<Self> {
        if p.dim() != Some(2) {
            return None;
        }
        let vs = p.vertices();
        let apex = vs[0];
        let mut tris = Vec::new();
        let mut cum = Vec::new();
        let mut total = 0.0;
        for w in vs[1..].windows(2) {
            total += 0.5 * (w[0] - apex).cross(w[1] - apex);
            tris.push((w[0], w[1]));
            cum.push(total);
        }
        Some(Self { apex, tris, cum })
    }

    pub(crate) fn area(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> Vec2 {
        let t = rng.random::<f64>() * self.area();
        let i = self.cum.partition_point(|&c| c < t).min(self.tris.len() - 1);
        let (b, c) = self.tris[i];
        let (mut u, mut v) = (rng.random::<f64>(), rng.random::<f64>());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        self.apex + (b - self.apex) * u + (c - self.apex) * v
    }
}

/// Run `samples` draws of `f` split over fixed RNG streams in parallel and
/// merge the moments in stream order.
fn run<F>(dim: usize, samples: usize, seed: u64, stream_label: u64, scale: f64, f: F) -> McEstimate
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, &mut Vec<f64>) + Sync,
{
    let parts: Vec<RunningStats> = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let n = samples / CHUNKS + usize::from(c < samples % CHUNKS);
            let mut rng = stream(seed, stream_label, c as u64);
            let mut st = RunningStats::new(dim);
            let mut buf = Vec::with_capacity(dim);
            for _ in 0..n {
                buf.clear();
                f(&mut rng, &mut buf);
                st.push(&buf);
            }
            st
        })
        .collect();
    let mut total = RunningStats::new(dim);
    for p in &parts {
        total.merge(p);
    }
    McEstimate {
        mean: total.mean().iter().map(|m| m * scale).collect(),
        stderr: total.stderr().iter().map(|s| s * scale).collect(),
        samples,
    }
}

fn check(phi: &Valuation, samples: usize) -> Result<()> {
    phi.validate()?;
    if samples < 2 {
        return Err(Error::invalid("samples", "need at least 2 samples"));
    }
    Ok(())
}

/// `∫ φ(K ∩ (M + x)) dx` with `x` uniform on the support `K ⊕ (−M)`.
pub fn translative_mc(
    phi: &Valuation,
    k: &ConvexPolygon,
    m: &ConvexPolygon,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    iterated_translative_mc(phi, &[k.clone(), m.clone()], samples, seed)
}

/// `∫⋯∫ φ(K_1 ∩ (K_2 + x_2) ∩ ⋯ ∩ (K_k + x_k)) dx_2 ⋯ dx_k`, each `x_i`
/// uniform on `K_1 ⊕ (−K_i)`.
pub fn iterated_translative_mc(
    phi: &Valuation,
    bodies: &[ConvexPolygon],
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check(phi, samples)?;
    if bodies.len() < 2 {
        return Err(Error::invalid("bodies", "need at least two bodies"));
    }
    let samplers: Option<Vec<PolygonSampler>> = bodies[1..]
        .iter()
        .map(|b| PolygonSampler::new(&minkowski_sum(&bodies[0], &reflect(b))))
        .collect();
    let Some(samplers) = samplers else {
        return Ok(McEstimate::exact_zero(phi.dim(), samples));
    };
    let scale: f64 = samplers.iter().map(PolygonSampler::area).product();
    let stream_label = if bodies.len() == 2 { label::TRANSLATIVE } else { label::ITERATED };
    Ok(run(phi.dim(), samples, seed, stream_label, scale, |rng, out| {
        let mut cur = bodies[0].clone();
        for (b, s) in bodies[1..].iter().zip(&samplers) {
            cur = intersect(&cur, &b.translate(s.sample(rng)));
            if cur.is_empty() {
                break;
            }
        }
        out.extend(phi.eval(&cur));
    }))
}

/// `∫∫ φ(K ∩ (ϑM + x)) dx ν(dϑ)` over rigid motions, `ν` the uniform
/// probability on rotations.
pub fn kinematic_mc(
    phi: &Valuation,
    k: &ConvexPolygon,
    m: &ConvexPolygon,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check(phi, samples)?;
    let Some(bb) = k.bbox() else {
        return Ok(McEstimate::exact_zero(phi.dim(), samples));
    };
    if m.is_empty() {
        return Ok(McEstimate::exact_zero(phi.dim(), samples));
    }
    let bb = bb.expand(m.max_norm());
    let size = bb.max - bb.min;
    Ok(run(phi.dim(), samples, seed, label::KINEMATIC, bb.area(), |rng, out| {
        let theta = rng.random::<f64>() * TAU;
        let x = bb.min + Vec2::new(rng.random::<f64>() * size.x, rng.random::<f64>() * size.y);
        out.extend(phi.eval(&intersect(k, &m.rotate(theta).translate(x))));
    }))
}

/// Principal kinematic formula, `Σ_{k=j}^{2} c^k_j c^{2+j−k}_2 V_k(K) V_{2+j−k}(M)`.
pub fn pkf_rhs(j: usize, k: &ConvexPolygon, m: &ConvexPolygon) -> Result<f64> {
    if j > 2 {
        return Err(Error::invalid("j", "need j ≤ 2"));
    }
    let (vk, vm) = (k.intrinsic_volumes(), m.intrinsic_volumes());
    let mut s = 0.0;
    for i in j..=2 {
        s += c_upper(i, j)? * c_upper(2 + j - i, 2)? * vk[i] * vm[2 + j - i];
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integral::translative_rhs;
    use std::f64::consts::PI;

    fn within(est: &McEstimate, truth: &[f64], k: f64) -> bool {
        est.mean
            .iter()
            .zip(truth)
            .zip(&est.stderr)
            .all(|((m, t), s)| (m - t).abs() <= k * s + 1e-12)
    }

    #[test]
    fn sampler_is_uniform_on_triangle() {
        let t = ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 2.0]).unwrap();
        let s = PolygonSampler::new(&ConvexPolygon::regular_ngon(6, 1.0)).unwrap();
        let mut rng = stream(1, 99, 0);
        let n = 20_000;
        let mut inside = 0;
        for _ in 0..n {
            let p = s.sample(&mut rng);
            assert!(ConvexPolygon::regular_ngon(6, 1.0).contains(p));
            if t.contains(p) {
                inside += 1;
            }
        }
        // P(point in T) = area(T ∩ hexagon) / area(hexagon)
        let frac = intersect(&t, &ConvexPolygon::regular_ngon(6, 1.0)).area() / s.area();
        let se = (frac * (1.0 - frac) / n as f64).sqrt();
        assert!((inside as f64 / n as f64 - frac).abs() < 4.0 * se);
    }

    #[test]
    fn translative_v0_squares() {
        let sq = ConvexPolygon::square(1.0);
        let est = translative_mc(&Valuation::iv(0), &sq, &sq, 100_000, 3).unwrap();
        assert!(within(&est, &[4.0], 3.0), "{est:?}");
    }

    #[test]
    fn translative_v1_splitting() {
        let k = ConvexPolygon::rect(2.0, 1.0);
        let m = ConvexPolygon::square(1.0);
        let rhs = translative_rhs(&Valuation::iv(1), &[k.clone(), m.clone()]).unwrap();
        assert!((rhs[0] - 7.0).abs() < 1e-12);
        let est = translative_mc(&Valuation::iv(1), &k, &m, 50_000, 4).unwrap();
        assert!(within(&est, &rhs, 3.5));
    }

    #[test]
    fn translative_area_is_product() {
        let k = ConvexPolygon::regular_ngon(5, 1.0);
        let m = ConvexPolygon::rect(0.5, 2.0);
        let est = translative_mc(&Valuation::iv(2), &k, &m, 50_000, 5).unwrap();
        assert!(within(&est, &[k.area() * m.area()], 3.5));
    }

    #[test]
    fn deterministic_for_seed() {
        let sq = ConvexPolygon::square(1.0);
        let a = translative_mc(&Valuation::iv(1), &sq, &sq, 1000, 9).unwrap();
        let b = translative_mc(&Valuation::iv(1), &sq, &sq, 1000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_support_is_exact_zero() {
        let p = ConvexPolygon::point(Vec2::new(0.0, 0.0));
        let est = translative_mc(&Valuation::iv(0), &p, &p, 10, 1).unwrap();
        assert_eq!(est.mean, vec![0.0]);
        assert_eq!(est.stderr, vec![0.0]);
    }

    #[test]
    fn pkf_values() {
        let b = ConvexPolygon::regular_ngon(256, 1.0);
        let exact_poly = pkf_rhs(0, &b, &b).unwrap();
        let iv = b.intrinsic_volumes();
        assert!((exact_poly - (2.0 * iv[2] + 2.0 / PI * iv[1] * iv[1])).abs() < 1e-12);
        assert!((exact_poly - 4.0 * PI).abs() < 1e-3);
        let sq = ConvexPolygon::square(1.0);
        assert!((pkf_rhs(1, &sq, &sq).unwrap() - 4.0).abs() < 1e-14);
        assert!((pkf_rhs(2, &sq, &b).unwrap() - iv[2]).abs() < 1e-14);
    }

    #[test]
    fn kinematic_mc_square_pair() {
        let sq = ConvexPolygon::square(1.0).translate(Vec2::new(-0.5, -0.5));
        let est = kinematic_mc(&Valuation::iv(1), &sq, &sq, 50_000, 11).unwrap();
        assert!(within(&est, &[4.0], 3.5), "{est:?}");
    }
}
