use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::constants::c_area;
use crate::error::{Error, Result};
use crate::geom2d::{area_measure, ConvexPolygon, SphereMeasure};

/// Index `(l, p)` of a real circular harmonic: `p = 1` is the cosine,
/// `p = 2` the sine; degree 0 only has `p = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub l: u32,
    pub p: u8,
}

impl HarmonicIndex {
    pub fn new(l: u32, p: u8) -> Result<Self> {
        let ok = if l == 0 { p == 1 } else { p == 1 || p == 2 };
        if !ok {
            return Err(Error::invalid("p", format!("no harmonic Y_{{{l},{p}}} in the plane")));
        }
        Ok(Self { l, p })
    }

    /// All indices of degree `≤ l_max`, ordered by degree then `p`.
    pub fn up_to(l_max: u32) -> Vec<HarmonicIndex> {
        std::iter::once(HarmonicIndex { l: 0, p: 1 })
            .chain((1..=l_max).flat_map(|l| [1, 2].map(|p| HarmonicIndex { l, p })))
            .collect()
    }

    /// `Y_{l,p}(θ)`.
    pub fn eval(self, theta: f64) -> f64 {
        let lt = self.l as f64 * theta;
        match (self.l, self.p) {
            (0, _) => 1.0,
            (_, 1) => std::f64::consts::SQRT_2 * lt.cos(),
            _ => std::f64::consts::SQRT_2 * lt.sin(),
        }
    }
}

/// `c_{2,j} ∫ Y_{l,p} dμ` for a measure standing in for `S_j`.
pub fn harmonic_of_measure(mu: &SphereMeasure, j: usize, idx: HarmonicIndex) -> Result<f64> {
    Ok(c_area(2, j)? * mu.harmonic(idx.l, idx.p))
}

/// Harmonic intrinsic volume `V_j^{l,p}(K) = c_{2,j} ∫ Y_{l,p} dS_j(K, ·)`.
pub fn harmonic_iv(k: &ConvexPolygon, j: usize, idx: HarmonicIndex) -> Result<f64> {
    if j > 1 {
        return Err(Error::invalid("j", "harmonic intrinsic volumes exist for j = 0, 1"));
    }
    harmonic_of_measure(&area_measure(k, j), j, idx)
}

/// Mean of `V_j^{l,p}(ϑK)` over `order` equally spaced rotations.
pub fn rotation_average_harmonic(
    k: &ConvexPolygon,
    j: usize,
    idx: HarmonicIndex,
    order: usize,
) -> Result<f64> {
    if order == 0 {
        return Err(Error::invalid("order", "quadrature order must be positive"));
    }
    let mut sum = 0.0;
    for i in 0..order {
        sum += harmonic_iv(&k.rotate(TAU * i as f64 / order as f64), j, idx)?;
    }
    Ok(sum / order as f64)
}
