use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channels::ChannelSpec;
use super::forward::grain_process_densities;
use super::invert::pair_with_report;
use super::report::DensityReport;
use crate::boolmodel::{eval_union, sample_stream, BooleanModelSpec};
use crate::error::{Error, Result};
use crate::geom2d::{area_measure, ConvexPolygon, Window};
use crate::integral::kernel_mixed_area;
use crate::rng::label;
use crate::stats::MeanCov;
use crate::valuations::{constants::alpha, SymTensor, Valuation, ValuationSet};

/// A truncated series with a bound on the neglected terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// `Σ_{i > n} x^i/i! ≤ x^{n+1}/(n+1)!·e^x` for `x ≥ 0`.
fn poisson_tail(x: f64, n: i64) -> f64 {
    if n < 0 {
        return x.exp();
    }
    let mut t = 1.0;
    for i in 1..=(n + 1) {
        t *= x / i as f64;
    }
    t * x.exp()
}

/// `E V_j(Z ∩ K_0)` from the inclusion–exclusion expansion over `k ≤ k_max`
/// grains, each term reduced to intrinsic volumes of `K_0`, mean grain area
/// `Ā`, mean `V_1` and the mean area measure `s̄` of the grain.
///
/// With weights `(−1)^{k−1}γ^k/k!` the `k`-th terms are
/// - `j = 1`: `V_1(K_0)Ā^k + k V_2(K_0) W̄ Ā^{k−1}`
/// - `j = 0`: `V_0(K_0)Ā^k + k V_2(K_0)Ā^{k−1} + 2k B(S_1(K_0), s̄)Ā^{k−1}
///   + C(k,2) V_2(K_0)·2B(s̄, s̄)Ā^{k−2}`
///
/// and `j = 2` sums to `(1 − e^{−γĀ})V_2(K_0)`.
pub fn expected_valuation_window(
    spec: &BooleanModelSpec,
    k0: &ConvexPolygon,
    j: usize,
    k_max: usize,
) -> Result<SeriesValue> {
    if j > 2 {
        return Err(Error::invalid("j", "j must be 0, 1 or 2"));
    }
    if k_max == 0 {
        return Err(Error::invalid("k_max", "at least one term is needed"));
    }
    let d = grain_process_densities(spec, &ChannelSpec::intrinsic_only())?;
    let g = spec.gamma;
    let (a, w) = (d.mean_area, d.v[1] / g);
    let s_bar = d.s1.scaled(1.0 / g);
    let [v0, v1, v2] = k0.intrinsic_volumes();
    if j == 2 {
        return Ok(SeriesValue {
            value: (1.0 - (-g * a).exp()) * v2,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let b_k = 2.0 * kernel_mixed_area(&area_measure(k0, 1), &s_bar);
    let b_ss = 2.0 * kernel_mixed_area(&s_bar, &s_bar);
    let mut value = 0.0;
    let mut weight = 1.0; // γ^k / k!
    for k in 1..=k_max {
        let kf = k as f64;
        weight *= g / kf;
        let term = if j == 1 {
            v1 * a.powi(k as i32) + kf * v2 * w * a.powi(k as i32 - 1)
        } else {
            let pair = if k >= 2 { kf * (kf - 1.0) / 2.0 * v2 * b_ss * a.powi(k as i32 - 2) } else { 0.0 };
            v0 * a.powi(k as i32) + kf * (v2 + b_k) * a.powi(k as i32 - 1) + pair
        };
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        value += sign * weight * term;
    }
    // the three families of terms are Poisson tails in x = γĀ
    let x = g * a;
    let n = k_max as i64;
    let tail_bound = if j == 1 {
        v1 * poisson_tail(x, n) + g * v2 * w * poisson_tail(x, n - 1)
    } else {
        v0 * poisson_tail(x, n)
            + g * (v2 + b_k.abs()) * poisson_tail(x, n - 1)
            + 0.5 * g * g * v2 * b_ss.abs() * poisson_tail(x, n - 2)
    };
    Ok(SeriesValue {
        value,
        tail_bound,
        terms: k_max,
    })
}

/// Simulated and predicted sides of an identity, with standard errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub lhs_stderr: f64,
    pub rhs: f64,
    pub rhs_stderr: f64,
    /// Deterministic error allowance of the right-hand side.
    pub bound: f64,
}

impl IdentityCheck {
    pub fn stderr(&self) -> f64 {
        self.lhs_stderr.hypot(self.rhs_stderr)
    }

    pub fn passes(&self, sigmas: f64) -> bool {
        let floor = 1e-9 * (1.0 + self.rhs.abs());
        (self.lhs - self.rhs).abs() <= sigmas * self.stderr() + self.bound + floor
    }
}

/// Sample mean ± stderr of `V_j(Z ∩ K)` over independent realizations drawn
/// on `K` dilated by the grain radius.
pub fn simulate_window_mean(
    spec: &BooleanModelSpec,
    k: &ConvexPolygon,
    j: usize,
    reps: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if reps < 2 {
        return Err(Error::invalid("reps", "at least two replications are needed"));
    }
    let window = Window::new(k.clone())?.dilate(spec.grain.r_max() * (1.0 + 1e-9) + 1e-12);
    let sim = BooleanModelSpec {
        window,
        ..spec.clone()
    };
    let phi = ValuationSet::single(Valuation::iv(j))?;
    let rows = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let real = sample_stream(&sim, seed, label::WINDOW, i)?;
            eval_union(&real, k, &phi)
        })
        .collect::<Result<Vec<_>>>()?;
    let mc = MeanCov::from_rows(&rows);
    Ok((mc.mean[0], mc.stderr(0)))
}

/// Both sides of `E V_j(Z ∩ K) = Σ_m V̄_{m, 2+j−m}(Z, K)`:
/// - `j = 2`: `V̄_2(Z)V_2(K)`
/// - `j = 1`: `V̄_1(Z)V_2(K) + V̄_2(Z)V_1(K)`
/// - `j = 0`: `V̄_0(Z)V_2(K) + 2B(S̄_1(Z), S_1(K)) + V̄_2(Z)V_0(K)`
///
/// The left side is simulated from a stream independent of the one behind
/// `report`; the right side uses the densities in `report`.
pub fn window_bias_identity(
    spec: &BooleanModelSpec,
    report: &DensityReport,
    k: &ConvexPolygon,
    j: usize,
    reps: usize,
    seed: u64,
) -> Result<IdentityCheck> {
    if j > 2 {
        return Err(Error::invalid("j", "j must be 0, 1 or 2"));
    }
    let (lhs, lhs_stderr) = simulate_window_mean(spec, k, j, reps, seed)?;
    let (rhs, grad, bound) = window_bias_rhs(report, k, j)?;
    Ok(IdentityCheck {
        lhs,
        lhs_stderr,
        rhs,
        rhs_stderr: report.delta_stderr(&grad),
        bound,
    })
}

/// Right side of the window identity with its gradient in the report channels.
/// `(rhs, gradient over report channels, truncation bound)`.
type Rhs = (f64, Vec<(usize, f64)>, f64);

pub(crate) fn window_bias_rhs(
    report: &DensityReport,
    k: &ConvexPolygon,
    j: usize,
) -> Result<Rhs> {
    let [kv0, kv1, kv2] = k.intrinsic_volumes();
    let idx = |l: &str| report.index(l).ok_or(Error::MissingChannel(l.into()));
    let (i0, i1, i2) = (idx("v0")?, idx("v1")?, idx("v2")?);
    let m = |i: usize| report.values[i].mean;
    Ok(match j {
        2 => (m(i2) * kv2, vec![(i2, kv2)], 0.0),
        1 => (m(i1) * kv2 + m(i2) * kv1, vec![(i1, kv2), (i2, kv1)], 0.0),
        _ => {
            let pair = pair_with_report(report, &area_measure(k, 1))?;
            let mut grad = vec![(i0, kv2), (i2, kv0)];
            grad.extend(pair.grad.iter().map(|&(i, g)| (i, 2.0 * g)));
            (m(i0) * kv2 + 2.0 * pair.value + m(i2) * kv0, grad, 2.0 * pair.bound)
        }
    })
}

/// Measured `Φ̄_j^{0,s}(Z)` against `1{s even}·α_{2,j,s}·Q^{s/2}·V̄_j(Z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorResidual {
    pub measured: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Standard error of each coordinate of `measured − predicted`.
    pub stderr: Vec<f64>,
}

impl TensorResidual {
    pub fn residual(&self) -> Vec<f64> {
        self.measured.iter().zip(&self.predicted).map(|(a, b)| a - b).collect()
    }

    pub fn passes(&self, sigmas: f64) -> bool {
        self.residual()
            .iter()
            .zip(&self.stderr)
            .zip(&self.predicted)
            .all(|((r, se), p)| r.abs() <= sigmas * se + 1e-9 * (1.0 + p.abs()))
    }
}

pub fn tensor_isotropy_check(report: &DensityReport, j: usize, s: usize) -> Result<TensorResidual> {
    if j > 1 {
        return Err(Error::invalid("j", "tensor channels exist for j = 0, 1"));
    }
    let idx = report.tensor_indices(j, s)?;
    let ij = report.index(&format!("v{j}")).ok_or(Error::MissingChannel(format!("v{j}")))?;
    let shape = if s.is_multiple_of(2) {
        SymTensor::metric_power(s / 2).scale(alpha(2, j, s)?)
    } else {
        SymTensor::zero(s)
    };
    let vj = report.values[ij].mean;
    let mut out = TensorResidual {
        measured: Vec::new(),
        predicted: Vec::new(),
        stderr: Vec::new(),
    };
    for (&i, &q) in idx.iter().zip(shape.coords()) {
        out.measured.push(report.values[i].mean);
        out.predicted.push(q * vj);
        out.stderr.push(report.delta_stderr(&[(i, 1.0), (ij, -q)]));
    }
    Ok(out)
}
