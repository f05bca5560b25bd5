use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::report::DensityReport;
use crate::error::{Error, Result};
use crate::geom2d::SphereMeasure;
use crate::integral::kernel_mixed_area;

/// Coverage above `1 − SATURATION_TOL` cannot be inverted.
pub const SATURATION_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum FitMethod {
    Isotropic,
    Kernel,
    HarmonicSeries { l_max: u32 },
}

/// Recovered intensity and grain-process densities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub method: FitMethod,
    pub gamma: f64,
    /// First-order (delta-method) standard error.
    pub gamma_stderr: f64,
    /// Recovered `V̄_j(Y)`; `V̄_0(Y)` is `γ̂`.
    pub v_y: [f64; 3],
    pub v_y_stderr: [f64; 3],
    pub mean_area: f64,
    pub mean_perimeter: f64,
    /// Bound on `|γ̂ − γ̂_∞|` from truncating the harmonic series.
    pub truncation_bound: Option<f64>,
}

struct Coverage {
    rho: f64,
    v2y: f64,
    v0: f64,
    v1: f64,
    idx: [usize; 3],
}

fn coverage(report: &DensityReport) -> Result<Coverage> {
    let mut idx = [0; 3];
    for (j, slot) in idx.iter_mut().enumerate() {
        let l = format!("v{j}");
        *slot = report.index(&l).ok_or(Error::MissingChannel(l))?;
    }
    let v2 = report.values[idx[2]].mean;
    if v2 >= 1.0 - SATURATION_TOL {
        return Err(Error::SaturatedCoverage { v2 });
    }
    Ok(Coverage {
        rho: 1.0 / (1.0 - v2),
        v2y: -(-v2).ln_1p(),
        v0: report.values[idx[0]].mean,
        v1: report.values[idx[1]].mean,
        idx,
    })
}

/// `γ̂ = ρV̄_0(Z) + ρ²Q` with `Q` a quadratic form in the `S̄_1(Z)` channels
/// whose gradient is `dq`.
fn finish(
    report: &DensityReport,
    c: &Coverage,
    method: FitMethod,
    q: f64,
    dq: Vec<(usize, f64)>,
    truncation_bound: Option<f64>,
) -> FitResult {
    let rho = c.rho;
    let gamma = rho * c.v0 + rho * rho * q;
    let mut grad = vec![(c.idx[0], rho), (c.idx[2], rho * rho * c.v0 + 2.0 * rho.powi(3) * q)];
    grad.extend(dq.into_iter().map(|(i, g)| (i, rho * rho * g)));
    let v1y = rho * c.v1;
    FitResult {
        method,
        gamma,
        gamma_stderr: report.delta_stderr(&grad),
        v_y: [gamma, v1y, c.v2y],
        v_y_stderr: [
            report.delta_stderr(&grad),
            report.delta_stderr(&[(c.idx[1], rho), (c.idx[2], rho * v1y)]),
            report.delta_stderr(&[(c.idx[2], rho)]),
        ],
        mean_area: c.v2y / gamma,
        mean_perimeter: 2.0 * v1y / gamma,
        truncation_bound,
    }
}

/// Isotropic inversion: `V̄_2(Y) = −ln(1 − V̄_2(Z))`, `V̄_1(Y) = ρV̄_1(Z)`,
/// `γ̂ = ρV̄_0(Z) + V̄_1(Y)²/π` with `ρ = 1/(1 − V̄_2(Z))`.
pub fn invert_isotropic(report: &DensityReport) -> Result<FitResult> {
    let c = coverage(report)?;
    let q = c.v1 * c.v1 / PI;
    let dq = vec![(c.idx[1], 2.0 * c.v1 / PI)];
    Ok(finish(report, &c, FitMethod::Isotropic, q, dq, None))
}

/// Inversion for arbitrary orientation laws:
/// `γ̂ = ρV̄_0(Z) + B(ρS̄_1(Z), ρS̄_1(Z))`.
///
/// Uses the binned atoms of `S̄_1(Z)` when present, otherwise the harmonic
/// series over every degree in the report.
pub fn invert_kernel(report: &DensityReport) -> Result<FitResult> {
    if let (Some(mu), Some(idx)) = (report.s1_atoms(), report.atom_indices()) {
        let c = coverage(report)?;
        let q = kernel_mixed_area(&mu, &mu);
        let dq = idx
            .iter()
            .zip(&report.atom_angles)
            .map(|(&i, &a)| (i, 2.0 * kernel_mixed_area(&SphereMeasure::from_atoms([(a, 1.0)]), &mu)))
            .collect();
        return Ok(finish(report, &c, FitMethod::Kernel, q, dq, None));
    }
    match report.harmonic_degree() {
        Some(l) => invert_series(report, l),
        None => Err(Error::MissingChannel("s1_atom_* or v1_l*_p*".into())),
    }
}

/// Kernel inversion through the harmonic series truncated at degree `l_max`.
pub fn invert_series(report: &DensityReport, l_max: u32) -> Result<FitResult> {
    let c = coverage(report)?;
    let (q, dq) = series_form(report, l_max, |i| report.values[i].mean)?;
    let bound = c.rho * c.rho * tail_factor(l_max) * c.v1 * c.v1;
    Ok(finish(report, &c, FitMethod::HarmonicSeries { l_max }, q, dq, Some(bound)))
}

/// `Σ_{l ≤ l_max} c_l Σ_p V̄^{l,p}(Z)·w^{l,p}` where `w` reads the partner
/// coefficient by channel index, with its gradient in the report channels.
fn series_form(
    report: &DensityReport,
    l_max: u32,
    partner: impl Fn(usize) -> f64,
) -> Result<(f64, Vec<(usize, f64)>)> {
    let mut q = 0.0;
    let mut grad = Vec::new();
    let i1 = report.index("v1").ok_or(Error::MissingChannel("v1".into()))?;
    let mut push = |i: usize, c: f64| {
        let (a, w) = (report.values[i].mean, partner(i));
        q += c * a * w;
        grad.push((i, c * w));
    };
    push(i1, series_constant(0));
    for l in 2..=l_max {
        let c = series_constant(l);
        for p in [1, 2] {
            let lab = DensityReport::harmonic_label(l, p);
            push(report.index(&lab).ok_or(Error::MissingChannel(lab))?, c);
        }
    }
    Ok((q, grad))
}

/// `(1/π)(1/L + 1/(L+1))`: with `|c_l| ≤ 1/(π(l² − 1))` and
/// `Σ_p (V^{l,p})² ≤ 2V_1²`, the neglected degrees `l > L` of the quadratic
/// form are bounded by this factor times `V_1(μ)V_1(ν)`.
pub fn tail_factor(l_max: u32) -> f64 {
    // c_1 = 0, so truncating at 0 or 1 is the same
    let l = l_max.max(1) as f64;
    (1.0 / l + 1.0 / (l + 1.0)) / PI
}

/// Diagonal weight `c_l` of the series
/// `B(μ, ν) = Σ_l c_l Σ_p V^{l,p}(μ)·V^{l,p}(ν)`, where
/// `V^{l,p}(μ) = ½∫Y_{l,p} dμ`.
///
/// `c_0 = 1/π`, `c_1 = 0` and `c_l = (−1)^l / (π(1 − l²))` for `l ≥ 2`;
/// for even `l` these are the cosine coefficients of `|sin|` up to the same
/// normalization.
pub fn series_constant(l: u32) -> f64 {
    match l {
        0 => 1.0 / PI,
        1 => 0.0,
        _ => {
            let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
            let l = l as f64;
            sign / (PI * (1.0 - l * l))
        }
    }
}

/// Entry `c_{l,m}^{p,q}` of the 2D intensity series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesConstant {
    pub l: u32,
    pub m: u32,
    pub p: u8,
    pub q: u8,
    pub value: f64,
}

/// The nonzero constants `c_{l,m}^{p,q}` for `l, m ≤ l_max` in the
/// normalization `γ = ρV̄_0(Z) + ρ² Σ c_{l,m}^{p,q} V̄_1^{l,p}(Z) V̄_1^{m,q}(Z)`.
/// The form is diagonal: only `l = m`, `p = q` occur.
pub fn harmonic_series_constants(l_max: u32) -> Vec<SeriesConstant> {
    crate::valuations::HarmonicIndex::up_to(l_max)
        .into_iter()
        .filter(|h| h.l != 1)
        .map(|h| SeriesConstant {
            l: h.l,
            m: h.l,
            p: h.p,
            q: h.p,
            value: series_constant(h.l),
        })
        .collect()
}

/// `B(S̄_1(Z), ν)` from a report, with its gradient and a truncation bound.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct KernelPairing {
    pub value: f64,
    pub grad: Vec<(usize, f64)>,
    pub bound: f64,
}

pub(crate) fn pair_with_report(report: &DensityReport, nu: &SphereMeasure) -> Result<KernelPairing> {
    if let (Some(mu), Some(idx)) = (report.s1_atoms(), report.atom_indices()) {
        let grad = idx
            .iter()
            .zip(&report.atom_angles)
            .map(|(&i, &a)| (i, kernel_mixed_area(&SphereMeasure::from_atoms([(a, 1.0)]), nu)))
            .collect();
        return Ok(KernelPairing {
            value: kernel_mixed_area(&mu, nu),
            grad,
            bound: 0.0,
        });
    }
    // harmonic route; with no harmonic channels only the l = 0 term is used
    let l_max = report.harmonic_degree().unwrap_or(0);
    let i1 = report.index("v1").ok_or(Error::MissingChannel("v1".into()))?;
    let coef = |i: usize| -> f64 {
        if i == i1 {
            return 0.5 * nu.total_mass();
        }
        let lab = &report.values[i].label;
        let rest = lab.trim_start_matches("v1_l");
        let (l, p) = rest.split_once("_p").expect("harmonic label");
        0.5 * nu.harmonic(l.parse().expect("degree"), p.parse().expect("index"))
    };
    let (value, grad) = series_form(report, l_max, coef)?;
    let bound = tail_factor(l_max) * report.values[i1].mean.abs() * 0.5 * nu.total_mass();
    Ok(KernelPairing { value, grad, bound })
}
