use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::boolmodel::GrainModel;
use crate::error::Result;
use crate::geom2d::{area_measure, normalize_angle, ConvexPolygon, SphereMeasure};
use crate::valuations::{Prepared, Valuation, ValuationSet};

/// Which density channels to estimate besides `V_0, V_1, V_2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    /// Harmonic coefficients `V_1^{l,p}` for `1 ≤ l ≤ l_max`.
    pub l_max: Option<u32>,
    /// Tensors `Φ_j^{0,s}` for `j ∈ {0, 1}` and `1 ≤ s ≤ s_max`.
    pub s_max: Option<usize>,
    /// Centered support function at this many equally spaced angles.
    pub support_angles: usize,
    /// Area-measure atoms binned on the normals the grain law can produce.
    /// Ignored for isotropic laws.
    pub atoms: bool,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self {
            l_max: Some(16),
            s_max: Some(4),
            support_angles: 16,
            atoms: true,
        }
    }
}

impl ChannelSpec {
    pub fn intrinsic_only() -> Self {
        Self {
            l_max: None,
            s_max: None,
            support_angles: 0,
            atoms: false,
        }
    }
}

pub(crate) fn atom_label(k: usize) -> String {
    format!("s1_atom_{k}")
}

/// Concrete channel layout for one grain law.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub set: ValuationSet,
    pub atom_angles: Vec<f64>,
    pub support_angles: Vec<f64>,
    pub labels: Vec<String>,
}

impl Layout {
    pub fn new(channels: &ChannelSpec, grain: &GrainModel) -> Result<Self> {
        let mut items = vec![Valuation::iv(0), Valuation::iv(1), Valuation::iv(2)];
        if let Some(l_max) = channels.l_max {
            for l in 1..=l_max {
                items.extend([1, 2].map(|p| Valuation::Harmonic { j: 1, l, p }));
            }
        }
        if let Some(s_max) = channels.s_max {
            for j in 0..=1 {
                items.extend((1..=s_max).map(|s| Valuation::Tensor { j, r: 0, s }));
            }
        }
        let mut support_angles = Vec::new();
        if channels.support_angles > 0 {
            let v = Valuation::support_grid(channels.support_angles);
            if let Valuation::CenteredSupport { angles } = &v {
                support_angles = angles.clone();
            }
            items.push(v);
        }
        let set = ValuationSet::new(items)?;
        let atom_angles = match (channels.atoms, grain.rotations()) {
            (true, Some(rot)) => normal_bins(grain, &rot),
            _ => Vec::new(),
        };
        let mut labels = set.labels();
        labels.extend((0..atom_angles.len()).map(atom_label));
        Ok(Self {
            set,
            atom_angles,
            support_angles,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn eval_into(&self, body: &ConvexPolygon, out: &mut Vec<f64>) {
        if self.atom_angles.is_empty() {
            self.set.eval_into(body, out);
            return;
        }
        let p = Prepared::with_degree(body, self.set.harmonic_degree());
        for v in &self.set.0 {
            v.eval_into(&p, out);
        }
        self.bin_into(p.s1(), out);
    }

    pub fn eval(&self, body: &ConvexPolygon) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        self.eval_into(body, &mut out);
        out
    }

    /// Append the masses of `mu` collected at the nearest bin angle.
    pub fn bin_into(&self, mu: &SphereMeasure, out: &mut Vec<f64>) {
        let start = out.len();
        out.resize(start + self.atom_angles.len(), 0.0);
        for &(a, w) in mu.atoms() {
            out[start + nearest(&self.atom_angles, a)] += w;
        }
    }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn nearest(bins: &[f64], a: f64) -> usize {
    let mut best = 0;
    for (i, &b) in bins.iter().enumerate() {
        if circ_dist(a, b) < circ_dist(a, bins[best]) {
            best = i;
        }
    }
    best
}

/// Every outer normal of a rotated grain, its antipode, and the four axis
/// directions of a rectangular cell, merged to distinct angles.
fn normal_bins(grain: &GrainModel, rotations: &[(f64, f64)]) -> Vec<f64> {
    let mut angles = vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
    for (_, shape) in grain.scaled_shapes() {
        for &(a, _) in area_measure(&shape, 1).atoms() {
            for &(_, theta) in rotations {
                angles.push(normalize_angle(a + theta));
                angles.push(normalize_angle(a + theta + PI));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(angles.len());
    for a in angles {
        if out.last().is_none_or(|&b| circ_dist(a, b) > 1e-9) {
            out.push(a);
        }
    }
    if out.len() > 1 && circ_dist(out[0], out[out.len() - 1]) <= 1e-9 {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolmodel::OrientationLaw;

    #[test]
    fn square_bins_are_the_axes() {
        let g = GrainModel::single(ConvexPolygon::square(0.1), OrientationLaw::Fixed).unwrap();
        let l = Layout::new(&ChannelSpec::default(), &g).unwrap();
        assert_eq!(l.atom_angles.len(), 4);
        let v = l.eval(&ConvexPolygon::rect(0.1, 0.3));
        let atoms = &v[v.len() - 4..];
        assert!((atoms[0] - 0.3).abs() < 1e-15 && (atoms[1] - 0.1).abs() < 1e-15);
        assert_eq!(l.labels.len(), l.dim());
        assert_eq!(v.len(), l.dim());
    }

    #[test]
    fn isotropic_laws_have_no_atoms() {
        let g = GrainModel::single(ConvexPolygon::square(0.1), OrientationLaw::Uniform).unwrap();
        let l = Layout::new(&ChannelSpec::default(), &g).unwrap();
        assert!(l.atom_angles.is_empty());
        // 3 + 2·16 harmonics + 2·(2+3+4+5) tensor coordinates + 16 support angles
        assert_eq!(l.dim(), 3 + 32 + 28 + 16);
        let l = Layout::new(&ChannelSpec::intrinsic_only(), &g).unwrap();
        assert_eq!(l.labels, ["v0", "v1", "v2"]);
    }

    #[test]
    fn triangle_bins_include_antipodes() {
        let t = ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let g = GrainModel::single(
            t,
            OrientationLaw::Discrete {
                angles: vec![0.0, 0.5],
                weights: vec![0.5, 0.5],
            },
        )
        .unwrap();
        let l = Layout::new(&ChannelSpec::default(), &g).unwrap();
        // hypotenuse normals π/4, 5π/4 and their rotations by 0.5; axes and axis+0.5
        assert_eq!(l.atom_angles.len(), 4 + 2 + 4 + 2);
    }
}
