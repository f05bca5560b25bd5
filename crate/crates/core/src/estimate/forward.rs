use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::channels::{ChannelSpec, Layout};
use super::report::DensityReport;
use crate::boolmodel::BooleanModelSpec;
use crate::error::Result;
use crate::geom2d::{area_measure, SphereMeasure};
use crate::integral::kernel_mixed_area;

/// Exact densities of the grain process `Y` for a finite grain law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrainProcessDensities {
    pub gamma: f64,
    /// `V̄_j(Y) = γ E V_j(Z_0)`; in particular `V̄_0(Y) = γ`.
    pub v: [f64; 3],
    /// `Ā = V̄_2(Y)/γ`.
    pub mean_area: f64,
    /// `L̄ = 2V̄_1(Y)/γ`.
    pub mean_perimeter: f64,
    /// `S̄_1(Y, ·)`: atoms for finite orientation laws, uniform otherwise.
    pub s1: SphereMeasure,
    /// `B(S̄_1(Y), S̄_1(Y)) = ½V̄_{1,1}(Y, Y)`.
    pub self_kernel: f64,
    pub isotropic: bool,
    /// Every channel of the layout, as the exact `γ E φ(Z_0)`.
    pub report: DensityReport,
}

/// Closed-form expectations over the grain law.
///
/// Finite orientation laws are summed exactly. For the uniform law each
/// channel is a trigonometric polynomial in the rotation angle of degree at
/// most `max(l_max, s_max)`, so an equispaced rule with one more node is
/// exact; the centered support function averages to `V_1/π`.
pub fn grain_process_densities(
    spec: &BooleanModelSpec,
    channels: &ChannelSpec,
) -> Result<GrainProcessDensities> {
    spec.validate()?;
    let layout = Layout::new(channels, &spec.grain)?;
    let mut acc = vec![0.0; layout.dim()];
    let mut s1 = SphereMeasure::zero();
    let add = |acc: &mut Vec<f64>, v: Vec<f64>, w: f64| {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += w * x;
        }
    };
    let rotations = spec.grain.rotations();
    let isotropic = rotations.is_none();
    for (ws, shape) in spec.grain.scaled_shapes() {
        match &rotations {
            Some(rot) => {
                for &(wr, theta) in rot {
                    let body = if theta == 0.0 { shape.clone() } else { shape.rotate(theta) };
                    add(&mut acc, layout.eval(&body), ws * wr);
                    s1 = s1.add(&area_measure(&body, 1).scaled(ws * wr));
                }
            }
            None => {
                let order = channels.l_max.unwrap_or(0).max(channels.s_max.unwrap_or(0) as u32) + 1;
                let w = ws / order as f64;
                for i in 0..order {
                    let body = shape.rotate(TAU * i as f64 / order as f64);
                    let mut v = layout.eval(&body);
                    for (x, lab) in v.iter_mut().zip(&layout.labels) {
                        if lab.starts_with("hstar_") {
                            *x = shape.intrinsic_volumes()[1] / PI;
                        }
                    }
                    add(&mut acc, v, w);
                }
            }
        }
    }
    let g = spec.gamma;
    for a in &mut acc {
        *a *= g;
    }
    let v = [acc[0], acc[1], acc[2]];
    let s1 = if isotropic {
        SphereMeasure::uniform(v[1] / PI)
    } else {
        s1.scaled(g)
    };
    Ok(GrainProcessDensities {
        gamma: g,
        v,
        mean_area: v[2] / g,
        mean_perimeter: 2.0 * v[1] / g,
        self_kernel: kernel_mixed_area(&s1, &s1),
        s1,
        isotropic,
        report: DensityReport::exact(channels, &layout, acc),
    })
}

/// Predicted densities of `Z` from those of `Y`.
///
/// `V̄_2(Z) = 1 − e^{−V̄_2(Y)}`, `V̄_0(Z) = e^{−V̄_2(Y)}(γ − B(S̄_1(Y), S̄_1(Y)))`;
/// every other channel is of degree 1 and picks up the factor `e^{−V̄_2(Y)}`,
/// except `Φ_0^{0,s}`, which is a multiple of `V_0`.
pub fn miles_forward(d: &GrainProcessDensities) -> DensityReport {
    let q = (-d.v[2]).exp();
    let v0 = q * (d.gamma - d.self_kernel);
    let mut out = d.report.clone();
    for c in &mut out.values {
        c.mean = match c.label.as_str() {
            "v0" => v0,
            "v2" => 1.0 - q,
            l if l.starts_with("phi0_") => c.mean * v0 / d.gamma,
            _ => q * c.mean,
        };
    }
    out
}
