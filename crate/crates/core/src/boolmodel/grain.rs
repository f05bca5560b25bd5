use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom2d::{min_enclosing_circle, ConvexPolygon};

/// Law of the rotation applied to a grain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum OrientationLaw {
    Fixed,
    Uniform,
    Discrete { angles: Vec<f64>, weights: Vec<f64> },
}

/// Discrete law of the scale factor applied to a grain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleLaw {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Default for ScaleLaw {
    fn default() -> Self {
        Self {
            values: vec![1.0],
            weights: vec![1.0],
        }
    }
}

fn check_weights(field: &'static str, w: &[f64], n: usize) -> Result<()> {
    if w.len() != n || n == 0 {
        return Err(Error::invalid(field, format!("expected {n} weights, got {}", w.len())));
    }
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::invalid(field, "weights must be finite and nonnegative"));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(field, format!("weights sum to {s}, not 1")));
    }
    Ok(())
}

fn pick<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    if weights.len() == 1 {
        return 0;
    }
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Distribution of the typical grain: a weighted family of base shapes,
/// each centred at its circumcentre, rotated and scaled independently.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GrainModelParts", into = "GrainModelParts")]
pub struct GrainModel {
    shapes: Vec<ConvexPolygon>,
    weights: Vec<f64>,
    orientation: OrientationLaw,
    scale: ScaleLaw,
}

#[derive(Serialize, Deserialize)]
struct GrainModelParts {
    shapes: Vec<ConvexPolygon>,
    weights: Vec<f64>,
    orientation: OrientationLaw,
    scale: ScaleLaw,
}

impl TryFrom<GrainModelParts> for GrainModel {
    type Error = Error;
    fn try_from(p: GrainModelParts) -> Result<Self> {
        GrainModel::new(p.shapes, p.weights, p.orientation, p.scale)
    }
}

impl From<GrainModel> for GrainModelParts {
    fn from(g: GrainModel) -> Self {
        Self {
            shapes: g.shapes,
            weights: g.weights,
            orientation: g.orientation,
            scale: g.scale,
        }
    }
}

impl GrainModel {
    pub fn new(
        shapes: Vec<ConvexPolygon>,
        weights: Vec<f64>,
        orientation: OrientationLaw,
        scale: ScaleLaw,
    ) -> Result<Self> {
        check_weights("shape weights", &weights, shapes.len())?;
        if shapes.iter().any(ConvexPolygon::is_empty) {
            return Err(Error::invalid("shapes", "grains must be nonempty"));
        }
        if let OrientationLaw::Discrete { angles, weights } = &orientation {
            check_weights("orientation weights", weights, angles.len())?;
        }
        check_weights("scale weights", &scale.weights, scale.values.len())?;
        if scale.values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::invalid("scale", "scale values must be positive"));
        }
        let shapes = shapes
            .into_iter()
            .map(|s| {
                let c = min_enclosing_circle(s.vertices()).expect("nonempty").center;
                // already centred shapes are kept bit-for-bit
                if c.norm() <= 1e-12 * s.max_norm().max(1.0) {
                    s
                } else {
                    s.translate(-c)
                }
            })
            .collect();
        Ok(Self {
            shapes,
            weights,
            orientation,
            scale,
        })
    }

    /// A single shape with the given orientation law and unit scale.
    pub fn single(shape: ConvexPolygon, orientation: OrientationLaw) -> Result<Self> {
        Self::new(vec![shape], vec![1.0], orientation, ScaleLaw::default())
    }

    pub fn shapes(&self) -> &[ConvexPolygon] {
        &self.shapes
    }

    pub fn orientation(&self) -> &OrientationLaw {
        &self.orientation
    }

    pub fn is_isotropic(&self) -> bool {
        self.orientation == OrientationLaw::Uniform
    }

    /// Deterministic bound on the circumradius of every grain.
    pub fn r_max(&self) -> f64 {
        let smax = self.scale.values.iter().copied().fold(0.0, f64::max);
        self.shapes.iter().map(ConvexPolygon::max_norm).fold(0.0, f64::max) * smax
    }

    /// The law as weighted unrotated grains `(weight, scaled shape)`;
    /// orientation is handled separately by [`GrainModel::rotations`].
    pub fn scaled_shapes(&self) -> Vec<(f64, ConvexPolygon)> {
        let mut out = Vec::new();
        for (s, w) in self.shapes.iter().zip(&self.weights) {
            for (v, sw) in self.scale.values.iter().zip(&self.scale.weights) {
                out.push((w * sw, s.scale(*v)));
            }
        }
        out
    }

    /// Weighted rotation angles for non-uniform orientation laws.
    pub fn rotations(&self) -> Option<Vec<(f64, f64)>> {
        match &self.orientation {
            OrientationLaw::Fixed => Some(vec![(1.0, 0.0)]),
            OrientationLaw::Uniform => None,
            OrientationLaw::Discrete { angles, weights } => {
                Some(weights.iter().copied().zip(angles.iter().copied()).collect())
            }
        }
    }

    /// Draw one centred grain.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> ConvexPolygon {
        let shape = &self.shapes[pick(rng, &self.weights)];
        let scale = self.scale.values[pick(rng, &self.scale.weights)];
        let theta = match &self.orientation {
            OrientationLaw::Fixed => 0.0,
            OrientationLaw::Uniform => rng.random::<f64>() * TAU,
            OrientationLaw::Discrete { angles, weights } => angles[pick(rng, weights)],
        };
        let g = if scale == 1.0 { shape.clone() } else { shape.scale(scale) };
        if theta == 0.0 { g } else { g.rotate(theta) }
    }
}
