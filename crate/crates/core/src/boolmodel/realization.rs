use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GrainModel;
use crate::error::{Error, Result};
use crate::geom2d::{intersect, ConvexPolygon, Vec2, Window};
use crate::integral::PolygonSampler;
use crate::rng::{label, stream};
use crate::valuations::mixed_area;

/// Default cap on the expected number of germs per realization.
pub const DEFAULT_GERM_CAP: usize = 100_000;

/// A stationary Boolean model observed in a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BooleanModelSpec {
    pub gamma: f64,
    pub grain: GrainModel,
    pub window: Window,
}

impl BooleanModelSpec {
    pub fn new(gamma: f64, grain: GrainModel, window: Window) -> Result<Self> {
        let s = Self { gamma, grain, window };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::invalid("gamma", format!("intensity must be positive, got {}", self.gamma)));
        }
        Ok(())
    }

    /// Region where germs of grains that can reach the window live.
    pub fn germ_region(&self) -> Window {
        self.window.dilate(self.grain.r_max())
    }

    /// Mean germ count `γ · area(window ⊕ [−R, R]²)`.
    pub fn expected_germs(&self) -> f64 {
        self.gamma * self.germ_region().area()
    }
}

/// Provenance of a realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub stream: u64,
    pub index: u64,
}

/// One placed grain: germ and the centred, rotated and scaled shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grain {
    pub germ: Vec2,
    pub shape: ConvexPolygon,
}

impl Grain {
    pub fn placed(&self) -> ConvexPolygon {
        self.shape.translate(self.germ)
    }
}

/// A sampled configuration: all grains whose germ lies in the dilated window,
/// sorted lexicographically by germ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub seed: SeedRecord,
    pub window: Window,
    pub grains: Vec<Grain>,
}

impl Realization {
    pub fn placed(&self) -> Vec<ConvexPolygon> {
        self.grains.iter().map(Grain::placed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("realizations serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

fn sample_with<R: Rng>(spec: &BooleanModelSpec, rng: &mut R, seed: SeedRecord) -> Result<Realization> {
    spec.validate()?;
    let region = spec.germ_region();
    let mean = spec.gamma * region.area();
    if mean > DEFAULT_GERM_CAP as f64 {
        return Err(Error::TooManyGerms {
            expected: mean,
            cap: DEFAULT_GERM_CAP,
        });
    }
    let n = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    let sampler = PolygonSampler::new(region.polygon()).expect("window is full-dimensional");
    let mut grains: Vec<Grain> = (0..n)
        .map(|_| {
            let germ = sampler.sample(rng);
            Grain {
                germ,
                shape: spec.grain.sample(rng),
            }
        })
        .collect();
    grains.sort_by(|a, b| a.germ.lex_cmp(&b.germ));
    Ok(Realization {
        seed,
        window: spec.window.clone(),
        grains,
    })
}

/// Replicate `index` of the realization stream for `seed`.
pub fn sample_replicate(spec: &BooleanModelSpec, seed: u64, index: u64) -> Result<Realization> {
    sample_stream(spec, seed, label::REALIZATION, index)
}

/// Replicate `index` drawn from an explicit stream label, for callers that
/// need realizations independent of the main stream.
pub fn sample_stream(
    spec: &BooleanModelSpec,
    seed: u64,
    stream_label: u64,
    index: u64,
) -> Result<Realization> {
    let rec = SeedRecord {
        seed,
        stream: stream_label,
        index,
    };
    sample_with(spec, &mut stream(seed, stream_label, index), rec)
}

/// The realization for `(spec, seed)`.
pub fn sample_realization(spec: &BooleanModelSpec, seed: u64) -> Result<Realization> {
    sample_replicate(spec, seed, 0)
}

/// `Θ(𝒦_C) = γ E V_2(Z_0 ⊕ (−C))`, the mean number of grains hitting `C`.
pub fn hitting_intensity(spec: &BooleanModelSpec, c: &ConvexPolygon) -> f64 {
    let (v1c, v2c) = (c.intrinsic_volumes()[1], c.area());
    let mut e = 0.0;
    for (w, shape) in spec.grain.scaled_shapes() {
        let a = shape.area();
        let mixed = match spec.grain.rotations() {
            // rotation mean of V(ϑK, −C) is V_1(K) V_1(C) / π
            None => shape.intrinsic_volumes()[1] * v1c / std::f64::consts::PI,
            Some(rots) => rots
                .iter()
                .map(|&(rw, th)| rw * mixed_area(&shape.rotate(th), &crate::geom2d::reflect(c)))
                .sum(),
        };
        e += w * (a + 2.0 * mixed + v2c);
    }
    spec.gamma * e
}

/// Number of grains hitting `C` in each of `reps` independent realizations.
pub fn hitting_count(
    spec: &BooleanModelSpec,
    c: &ConvexPolygon,
    reps: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let r = spec.grain.r_max();
    if !spec.window.contains_with_margin(c, r) {
        return Err(Error::MarginViolated { margin: r });
    }
    (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let rec = SeedRecord {
                seed,
                stream: label::HITTING,
                index: i,
            };
            let real = sample_with(spec, &mut stream(seed, label::HITTING, i), rec)?;
            Ok(real
                .grains
                .iter()
                .filter(|g| !intersect(c, &g.placed()).is_empty())
                .count())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolmodel::OrientationLaw;

    fn squares(gamma: f64, side: f64) -> BooleanModelSpec {
        let g = GrainModel::single(ConvexPolygon::square(side), OrientationLaw::Fixed).unwrap();
        BooleanModelSpec::new(gamma, g, Window::unit_square()).unwrap()
    }

    #[test]
    fn invalid_gamma() {
        let g = GrainModel::single(ConvexPolygon::square(0.1), OrientationLaw::Fixed).unwrap();
        assert!(BooleanModelSpec::new(0.0, g.clone(), Window::unit_square()).is_err());
        assert!(BooleanModelSpec::new(f64::NAN, g, Window::unit_square()).is_err());
    }

    #[test]
    fn tiny_intensity_is_mostly_empty() {
        let spec = squares(1e-9, 0.1);
        let empty = (0..50).filter(|&i| sample_replicate(&spec, 1, i).unwrap().grains.is_empty()).count();
        assert_eq!(empty, 50);
    }

    #[test]
    fn reproducible_and_sorted() {
        let spec = squares(50.0, 0.1);
        let a = sample_realization(&spec, 7).unwrap();
        assert_eq!(a, sample_realization(&spec, 7).unwrap());
        assert_ne!(a, sample_realization(&spec, 8).unwrap());
        assert!(a.grains.windows(2).all(|w| w[0].germ.lex_cmp(&w[1].germ).is_le()));
        let region = spec.germ_region();
        assert!(a.grains.iter().all(|g| region.polygon().contains(g.germ)));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let spec = squares(50.0, 0.1);
        let a = sample_realization(&spec, 3).unwrap();
        assert_eq!(Realization::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn mean_germ_count() {
        let spec = squares(50.0, 0.1);
        let n = 2000;
        let counts: Vec<f64> = (0..n)
            .map(|i| sample_replicate(&spec, 11, i).unwrap().grains.len() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / n as f64;
        let mu = spec.expected_germs();
        assert!((mu - 50.0 * (1.0 + 2.0 * 0.05 * 2f64.sqrt()).powi(2)).abs() < 1e-9);
        assert!((mean - mu).abs() < 3.0 * (mu / n as f64).sqrt(), "{mean} vs {mu}");
    }

    #[test]
    fn germ_cap() {
        let spec = squares(1e6, 0.1);
        assert!(matches!(sample_realization(&spec, 1), Err(Error::TooManyGerms { .. })));
    }

    #[test]
    fn hitting_intensity_for_squares() {
        let g = GrainModel::single(ConvexPolygon::square(0.2), OrientationLaw::Fixed).unwrap();
        let spec = BooleanModelSpec::new(20.0, g, Window::rect(Vec2::new(-1.0, -1.0), Vec2::new(2.0, 2.0)).unwrap()).unwrap();
        let c = ConvexPolygon::square(0.2);
        assert!((hitting_intensity(&spec, &c) - 3.2).abs() < 1e-12);
        let far = ConvexPolygon::square(0.2).translate(Vec2::new(1.85, 0.0));
        assert!(matches!(hitting_count(&spec, &far, 1, 0), Err(Error::MarginViolated { .. })));
    }
}
