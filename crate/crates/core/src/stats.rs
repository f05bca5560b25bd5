//! Streaming moments and sample covariance.

use serde::{Deserialize, Serialize};

/// Componentwise running mean and variance (Welford), mergeable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunningStats {
    n: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl RunningStats {
    pub fn new(dim: usize) -> Self {
        Self {
            n: 0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    pub fn push(&mut self, x: &[f64]) {
        debug_assert_eq!(x.len(), self.mean.len());
        self.n += 1;
        let n = self.n as f64;
        for (i, &xi) in x.iter().enumerate() {
            let d = xi - self.mean[i];
            self.mean[i] += d / n;
            self.m2[i] += d * (xi - self.mean[i]);
        }
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, o: &RunningStats) {
        if o.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = o.clone();
            return;
        }
        let (na, nb) = (self.n as f64, o.n as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = o.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += o.m2[i] + d * d * na * nb / n;
        }
        self.n += o.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Unbiased sample variance per component.
    pub fn variance(&self) -> Vec<f64> {
        let d = (self.n.max(2) - 1) as f64;
        self.m2.iter().map(|m| m / d).collect()
    }

    /// Standard error of the mean per component.
    pub fn stderr(&self) -> Vec<f64> {
        let n = self.n.max(1) as f64;
        self.variance().iter().map(|v| (v / n).sqrt()).collect()
    }
}

/// Mean vector and covariance of the mean from a table of samples (rows).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanCov {
    pub n: usize,
    pub mean: Vec<f64>,
    /// Row-major `dim × dim` covariance of the sample mean.
    pub cov: Vec<f64>,
}

impl MeanCov {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        let mut mean = vec![0.0; dim];
        for r in rows {
            for (m, x) in mean.iter_mut().zip(r) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= n.max(1) as f64;
        }
        let mut cov = vec![0.0; dim * dim];
        for r in rows {
            for i in 0..dim {
                let di = r[i] - mean[i];
                if di == 0.0 {
                    continue;
                }
                for j in i..dim {
                    cov[i * dim + j] += di * (r[j] - mean[j]);
                }
            }
        }
        let scale = 1.0 / ((n.max(2) - 1) as f64 * n.max(1) as f64);
        for i in 0..dim {
            for j in i..dim {
                let v = cov[i * dim + j] * scale;
                cov[i * dim + j] = v;
                cov[j * dim + i] = v;
            }
        }
        Self { n, mean, cov }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn stderr(&self, i: usize) -> f64 {
        self.cov[i * self.dim() + i].max(0.0).sqrt()
    }

    /// `sqrt(gᵀ Σ g)` for a gradient given as sparse `(index, weight)` pairs.
    pub fn delta_stderr(&self, grad: &[(usize, f64)]) -> f64 {
        let d = self.dim();
        let mut v = 0.0;
        for &(i, gi) in grad {
            for &(j, gj) in grad {
                v += gi * gj * self.cov[i * d + j];
            }
        }
        v.max(0.0).sqrt()
    }
}
