use std::f64::consts::{SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use super::{normalize_angle, ConvexPolygon, Vec2, ANGLE_TOL};

/// A finite measure on the unit circle: point masses at angles plus an
/// optional uniform component with the given density per radian.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SphereMeasure {
    /// `(angle in [0, 2π), mass)`, sorted by angle, merged within [`ANGLE_TOL`].
    atoms: Vec<(f64, f64)>,
    /// Density of the uniform component with respect to arc length.
    density: f64,
}

impl SphereMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Uniform measure with the given density per radian (total mass `2π·density`).
    pub fn uniform(density: f64) -> Self {
        Self {
            atoms: Vec::new(),
            density,
        }
    }

    pub fn from_atoms<I: IntoIterator<Item = (f64, f64)>>(atoms: I) -> Self {
        let mut m = Self::zero();
        m.atoms = atoms
            .into_iter()
            .map(|(a, w)| (normalize_angle(a), w))
            .collect();
        m.canonicalize();
        m
    }

    fn canonicalize(&mut self) {
        self.atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.atoms.len());
        for &(a, w) in &self.atoms {
            match out.last_mut() {
                Some(last) if a - last.0 <= ANGLE_TOL => last.1 += w,
                _ => out.push((a, w)),
            }
        }
        // wrap-around: an atom just below 2π joins the one at 0
        if out.len() >= 2 {
            let last = out[out.len() - 1];
            if TAU - last.0 + out[0].0 <= ANGLE_TOL {
                out[0].1 += last.1;
                out.pop();
            }
        }
        self.atoms = out;
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>() + TAU * self.density
    }

    /// `∫ u μ(du)`; the uniform part contributes nothing.
    pub fn centroid(&self) -> Vec2 {
        self.atoms
            .iter()
            .fold(Vec2::ZERO, |acc, &(a, w)| acc + Vec2::from_angle(a) * w)
    }

    pub fn is_zero(&self) -> bool {
        self.density == 0.0 && self.atoms.iter().all(|a| a.1 == 0.0)
    }

    /// `μ + ν`.
    pub fn add(&self, other: &SphereMeasure) -> SphereMeasure {
        let mut m = SphereMeasure {
            atoms: self.atoms.iter().chain(&other.atoms).copied().collect(),
            density: self.density + other.density,
        };
        m.canonicalize();
        m
    }

    pub fn scaled(&self, f: f64) -> SphereMeasure {
        SphereMeasure {
            atoms: self.atoms.iter().map(|&(a, w)| (a, w * f)).collect(),
            density: self.density * f,
        }
    }

    /// Image under rotation by `theta`.
    pub fn rotated(&self, theta: f64) -> SphereMeasure {
        SphereMeasure::from_atoms(self.atoms.iter().map(|&(a, w)| (a + theta, w)))
            .with_density(self.density)
    }

    fn with_density(mut self, d: f64) -> Self {
        self.density = d;
        self
    }

    /// `(∫cos(lθ) μ(dθ), ∫sin(lθ) μ(dθ))`.
    pub fn fourier(&self, l: u32) -> (f64, f64) {
        let mut c = 0.0;
        let mut s = 0.0;
        for &(a, w) in &self.atoms {
            let (sn, cs) = (l as f64 * a).sin_cos();
            c += w * cs;
            s += w * sn;
        }
        if l == 0 {
            c += TAU * self.density;
        }
        (c, s)
    }

    /// `fourier(l)` for every `l ≤ l_max`, by the angle-addition recurrence.
    pub fn fourier_table(&self, l_max: u32) -> Vec<(f64, f64)> {
        let n = l_max as usize + 1;
        let mut out = vec![(0.0, 0.0); n];
        for &(a, w) in &self.atoms {
            let (s1, c1) = a.sin_cos();
            let (mut c, mut s) = (1.0, 0.0);
            for slot in out.iter_mut() {
                slot.0 += w * c;
                slot.1 += w * s;
                (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
            }
        }
        out[0].0 += TAU * self.density;
        out
    }

    /// `∫ Y_{l,p} dμ` for the real circular harmonics
    /// `Y_{0,1} = 1`, `Y_{l,1} = √2 cos lθ`, `Y_{l,2} = √2 sin lθ`.
    pub fn harmonic(&self, l: u32, p: u8) -> f64 {
        let (c, s) = self.fourier(l);
        match (l, p) {
            (0, _) => c,
            (_, 1) => SQRT_2 * c,
            (_, 2) => SQRT_2 * s,
            _ => panic!("harmonic index p must be 1 or 2, got {p}"),
        }
    }
}

/// Area measure `S_j(P, ·)` for `j ∈ {0, 1}`.
///
/// `S_1` has an atom at every outer edge normal with the edge length as mass
/// (a segment gets two antipodal atoms); `S_0 = V_0·σ` is uniform with total
/// mass `2π`. The empty body has the zero measure.
pub fn area_measure(p: &ConvexPolygon, j: usize) -> SphereMeasure {
    assert!(j <= 1, "area measures exist for j = 0, 1 in the plane");
    if p.is_empty() {
        return SphereMeasure::zero();
    }
    if j == 0 {
        return SphereMeasure::uniform(1.0);
    }
    SphereMeasure::from_atoms(p.edges().map(|(a, b)| {
        let e = b - a;
        (e.perp_cw().angle(), e.norm())
    }))
}
