use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest index accepted by the closed-form constants.
pub const MAX_INDEX: usize = 64;

fn check(name: &str, idx: usize) -> Result<()> {
    if idx > MAX_INDEX {
        return Err(Error::UnsupportedConstant(format!("{name} = {idx} > {MAX_INDEX}")));
    }
    Ok(())
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Binomial coefficient, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Volume of the `k`-dimensional unit ball.
pub fn kappa(k: usize) -> Result<f64> {
    check("k", k)?;
    let mut v = if k.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut i = k % 2;
    while i < k {
        i += 2;
        v *= 2.0 * PI / i as f64;
    }
    Ok(v)
}

/// Surface area of the unit sphere in `ℝ^k`, `ω_k = k κ_k`.
pub fn omega(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::UnsupportedConstant("ω_0".into()));
    }
    Ok(k as f64 * kappa(k)?)
}

/// `c^r_s = r! κ_r / (s! κ_s)`.
pub fn c_upper(r: usize, s: usize) -> Result<f64> {
    Ok(factorial(r) * kappa(r)? / (factorial(s) * kappa(s)?))
}

/// Tensor normalisation `c_k^{r,s} = ω_k / (r! s! ω_{k+s})`.
pub fn c_tensor(k: usize, r: usize, s: usize) -> Result<f64> {
    check("r", r)?;
    Ok(omega(k)? / (factorial(r) * factorial(s) * omega(k + s)?))
}

/// `c_{n,j} = C(n,j) / (n κ_{n−j})`, relating support and area measures.
pub fn c_area(n: usize, j: usize) -> Result<f64> {
    if n == 0 || j >= n {
        return Err(Error::UnsupportedConstant(format!("c_{{{n},{j}}} needs 0 ≤ j < n")));
    }
    Ok(binomial(n as i64, j as i64) / (n as f64 * kappa(n - j)?))
}

/// `α_{n,j,s} = (2/s!) ω_{n−j} ω_{s+n} / (ω_n ω_{n−j+s} ω_{s+1})`.
pub fn alpha(n: usize, j: usize, s: usize) -> Result<f64> {
    if n == 0 || j >= n {
        return Err(Error::UnsupportedConstant(format!("α_{{{n},{j},{s}}} needs 0 ≤ j < n")));
    }
    Ok(2.0 / factorial(s) * omega(n - j)? * omega(s + n)?
        / (omega(n)? * omega(n - j + s)? * omega(s + 1)?))
}

/// Dimension of the space of degree-`l` spherical harmonics on `S^{n−1}`.
pub fn harmonic_dim(n: usize, l: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::UnsupportedConstant(format!("D({n},{l}) needs n ≥ 2")));
    }
    check("l", l)?;
    let (n, l) = (n as i64, l as i64);
    Ok((binomial(n + l - 1, n - 1) - binomial(n + l - 3, n - 1)).round() as usize)
}

/// A query for one entry of the constants table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Constant {
    Kappa { k: usize },
    Omega { k: usize },
    CUpper { r: usize, s: usize },
    CTensor { k: usize, r: usize, s: usize },
    CArea { n: usize, j: usize },
    Alpha { n: usize, j: usize, s: usize },
    HarmonicDim { n: usize, l: usize },
}

impl Constant {
    pub fn value(self) -> Result<f64> {
        match self {
            Constant::Kappa { k } => kappa(k),
            Constant::Omega { k } => omega(k),
            Constant::CUpper { r, s } => c_upper(r, s),
            Constant::CTensor { k, r, s } => c_tensor(k, r, s),
            Constant::CArea { n, j } => c_area(n, j),
            Constant::Alpha { n, j, s } => alpha(n, j, s),
            Constant::HarmonicDim { n, l } => harmonic_dim(n, l).map(|d| d as f64),
        }
    }
}

/// One row of [`ConstantsTable`].
#[derive(Clone, Debug, Serialize)]
pub struct ConstantEntry {
    #[serde(flatten)]
    pub query: Constant,
    pub value: f64,
}

/// The constants relevant for the plane, precomputed up to a degree cap.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsTable {
    pub entries: Vec<ConstantEntry>,
}

impl ConstantsTable {
    /// All plane constants with ranks up to `s_max` and degrees up to `l_max`.
    pub fn plane(s_max: usize, l_max: usize) -> Result<Self> {
        let mut q = Vec::new();
        for k in 0..=s_max + 2 {
            q.push(Constant::Kappa { k });
            if k > 0 {
                q.push(Constant::Omega { k });
            }
        }
        for r in 0..=2 {
            for s in 0..=2 {
                q.push(Constant::CUpper { r, s });
            }
        }
        for k in 1..=2 {
            for r in 0..=s_max {
                for s in 0..=s_max {
                    q.push(Constant::CTensor { k, r, s });
                }
            }
        }
        for j in 0..2 {
            q.push(Constant::CArea { n: 2, j });
            for s in 0..=s_max {
                q.push(Constant::Alpha { n: 2, j, s });
            }
        }
        for l in 0..=l_max {
            q.push(Constant::HarmonicDim { n: 2, l });
        }
        let entries = q
            .into_iter()
            .map(|query| Ok(ConstantEntry { query, value: query.value()? }))
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }
}
