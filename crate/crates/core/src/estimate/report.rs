use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channels::{atom_label, ChannelSpec, Layout};
use crate::boolmodel::{boundary_corrected_functional, sample_replicate, BooleanModelSpec};
use crate::error::{Error, Result};
use crate::geom2d::{SphereMeasure, Window};
use crate::stats::MeanCov;
use crate::valuations::SymTensor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelEstimate {
    pub label: String,
    pub mean: f64,
    pub stderr: f64,
}

/// Densities `φ̄(Z)` of a Boolean model, estimated or predicted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    /// Replications behind the estimate; 0 for an exact prediction.
    pub reps: usize,
    pub seed: Option<u64>,
    pub channels: ChannelSpec,
    /// Bin angles of the `s1_atom_k` channels.
    pub atom_angles: Vec<f64>,
    /// Angles of the `hstar_k` channels.
    pub support_angles: Vec<f64>,
    pub values: Vec<ChannelEstimate>,
    /// Row-major covariance of the channel means.
    pub cov: Vec<f64>,
}

impl DensityReport {
    pub(crate) fn exact(channels: &ChannelSpec, layout: &Layout, values: Vec<f64>) -> Self {
        let n = values.len();
        Self {
            reps: 0,
            seed: None,
            channels: channels.clone(),
            atom_angles: layout.atom_angles.clone(),
            support_angles: layout.support_angles.clone(),
            values: layout
                .labels
                .iter()
                .zip(values)
                .map(|(l, mean)| ChannelEstimate {
                    label: l.clone(),
                    mean,
                    stderr: 0.0,
                })
                .collect(),
            cov: vec![0.0; n * n],
        }
    }

    fn from_sample(channels: &ChannelSpec, layout: &Layout, mc: MeanCov, seed: u64) -> Self {
        let values = layout
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| ChannelEstimate {
                label: l.clone(),
                mean: mc.mean[i],
                stderr: mc.stderr(i),
            })
            .collect();
        Self {
            reps: mc.n,
            seed: Some(seed),
            channels: channels.clone(),
            atom_angles: layout.atom_angles.clone(),
            support_angles: layout.support_angles.clone(),
            values,
            cov: mc.cov,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.reps == 0
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.values.iter().position(|c| c.label == label)
    }

    pub fn get(&self, label: &str) -> Result<&ChannelEstimate> {
        self.index(label)
            .map(|i| &self.values[i])
            .ok_or_else(|| Error::MissingChannel(label.to_string()))
    }

    pub fn mean(&self, label: &str) -> Result<f64> {
        Ok(self.get(label)?.mean)
    }

    /// `V̄_j(Z)`.
    pub fn v(&self, j: usize) -> Result<f64> {
        self.mean(&format!("v{j}"))
    }

    pub fn harmonic_label(l: u32, p: u8) -> String {
        format!("v1_l{l}_p{p}")
    }

    /// Largest `L` such that every `V̄_1^{l,p}` with `l ≤ L` is present.
    pub fn harmonic_degree(&self) -> Option<u32> {
        let l = self.channels.l_max?;
        (1..=l)
            .all(|l| [1, 2].iter().all(|&p| self.index(&Self::harmonic_label(l, p)).is_some()))
            .then_some(l)
    }

    /// Indices of the coordinates of `Φ̄_j^{0,s}`.
    pub fn tensor_indices(&self, j: usize, s: usize) -> Result<Vec<usize>> {
        (0..=s)
            .map(|i| {
                let l = format!("phi{j}_r0_s{s}_{i}");
                self.index(&l).ok_or(Error::MissingChannel(l))
            })
            .collect()
    }

    pub fn tensor(&self, j: usize, s: usize) -> Result<SymTensor> {
        let idx = self.tensor_indices(j, s)?;
        Ok(SymTensor::from_coords(idx.iter().map(|&i| self.values[i].mean).collect()))
    }

    /// Indices of the binned atoms of `S̄_1(Z, ·)`, if that channel exists.
    pub fn atom_indices(&self) -> Option<Vec<usize>> {
        if self.atom_angles.is_empty() {
            return None;
        }
        (0..self.atom_angles.len()).map(|k| self.index(&atom_label(k))).collect()
    }

    /// `S̄_1(Z, ·)` as a discrete measure on the bin angles.
    pub fn s1_atoms(&self) -> Option<SphereMeasure> {
        let idx = self.atom_indices()?;
        Some(SphereMeasure::from_atoms(
            self.atom_angles.iter().zip(idx).map(|(&a, i)| (a, self.values[i].mean)),
        ))
    }

    /// Covariance of channels `i` and `j`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.cov[i * self.dim() + j]
    }

    /// First-order standard error of `Σ g_i·mean_i`.
    pub fn delta_stderr(&self, grad: &[(usize, f64)]) -> f64 {
        let mut v = 0.0;
        for &(i, gi) in grad {
            for &(j, gj) in grad {
                v += gi * gj * self.covariance(i, j);
            }
        }
        v.max(0.0).sqrt()
    }
}

/// One replication per row, in replication order.
#[derive(Clone, Debug)]
pub struct EstimateRun {
    pub report: DensityReport,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// The cell must tile the plane by translations for the half-open estimator
/// to be unbiased; axis-parallel rectangles do.
fn check_cell(w: &Window) -> Result<()> {
    let b = w.bbox();
    if w.polygon().len() != 4 || (b.area() - w.area()).abs() > 1e-12 * b.area() {
        return Err(Error::invalid("window", "the cell estimator needs an axis-parallel rectangle"));
    }
    Ok(())
}

/// Mean ± stderr over `reps` independent realizations of the
/// boundary-corrected cell estimator, for every channel, per unit area.
///
/// The cell is `spec.window`; grains are simulated on the cell dilated by the
/// largest grain radius so every grain that can hit the cell is present.
pub fn estimate_densities(
    spec: &BooleanModelSpec,
    reps: usize,
    seed: u64,
    channels: &ChannelSpec,
) -> Result<DensityReport> {
    Ok(estimate_densities_rows(spec, reps, seed, channels)?.report)
}

/// [`estimate_densities`] keeping the per-replication rows.
pub fn estimate_densities_rows(
    spec: &BooleanModelSpec,
    reps: usize,
    seed: u64,
    channels: &ChannelSpec,
) -> Result<EstimateRun> {
    if reps < 2 {
        return Err(Error::invalid("reps", "at least two replications are needed"));
    }
    spec.validate()?;
    let cell = spec.window.clone();
    check_cell(&cell)?;
    let layout = Layout::new(channels, &spec.grain)?;
    let r = spec.grain.r_max();
    let sim = BooleanModelSpec {
        window: cell.dilate(r * (1.0 + 1e-9) + 1e-12),
        ..spec.clone()
    };
    let area = cell.area();
    let rows = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let real = sample_replicate(&sim, seed, i)?;
            let mut v = boundary_corrected_functional(&real, &cell, layout.dim(), &|b, out| {
                layout.eval_into(b, out)
            })?;
            for x in &mut v {
                *x /= area;
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let report = DensityReport::from_sample(channels, &layout, MeanCov::from_rows(&rows), seed);
    Ok(EstimateRun {
        report,
        labels: layout.labels,
        rows,
    })
}

/// An estimated channel against its prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelCheck {
    pub label: String,
    pub estimate: f64,
    pub stderr: f64,
    pub predicted: f64,
}

impl ChannelCheck {
    /// `|estimate − predicted| ≤ sigmas·stderr`, with a round-off floor for
    /// channels that vanish identically.
    pub fn passes(&self, sigmas: f64) -> bool {
        let floor = 1e-9 * (1.0 + self.predicted.abs());
        (self.estimate - self.predicted).abs() <= sigmas * self.stderr + floor
    }
}

/// Pair every channel of `estimate` with the same channel of `predicted`.
pub fn compare_reports(estimate: &DensityReport, predicted: &DensityReport) -> Result<Vec<ChannelCheck>> {
    estimate
        .values
        .iter()
        .map(|c| {
            Ok(ChannelCheck {
                label: c.label.clone(),
                estimate: c.mean,
                stderr: c.stderr,
                predicted: predicted.mean(&c.label)?,
            })
        })
        .collect()
}
