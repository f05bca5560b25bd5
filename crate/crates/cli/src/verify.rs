use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use boolval::boolmodel::{hitting_count, hitting_intensity, BooleanModelSpec};
use boolval::estimate::{
    compare_reports, estimate_densities, grain_process_densities, invert_isotropic, miles_forward,
    tensor_isotropy_check, ChannelSpec,
};
use boolval::fixtures;
use boolval::geom2d::{minkowski_sum, reflect, ConvexPolygon, Vec2};
use boolval::integral::{iterated_translative_mc, kinematic_mc, pkf_rhs, translative_mc, translative_rhs};
use boolval::valuations::Valuation;

use crate::error::{CliError, Result};
use crate::output::{emit_json, Metadata};

pub const SIGMAS: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Translative,
    Kinematic,
    Miles,
    Tensor,
    Harmonic,
    Poisson,
}

/// Options a suite may use; unset values fall back to per-suite defaults.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub samples: Option<usize>,
    pub l_max: Option<u32>,
    pub s_max: Option<usize>,
    pub channels: Option<ChannelSpec>,
    /// Replaces the suite's default model.
    pub model: Option<BooleanModelSpec>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub stderr: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn sigma(id: String, lhs: f64, stderr: f64, rhs: f64) -> Self {
        let pass = (lhs - rhs).abs() <= SIGMAS * stderr + 1e-12 * (1.0 + rhs.abs());
        Self { id, lhs, rhs, stderr, pass }
    }

    fn exact(id: String, lhs: f64, rhs: f64, rel: f64) -> Self {
        let pass = (lhs - rhs).abs() <= rel * rhs.abs().max(1.0);
        Self { id, lhs, rhs, stderr: 0.0, pass }
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    metadata: Metadata,
    suite: Suite,
    seed: u64,
    all_pass: bool,
    checks: Vec<CheckRecord>,
}

pub fn run_suite(suite: Suite, opt: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let seed = opt.seed.unwrap_or(1);
    match suite {
        Suite::Translative => translative(seed, opt.samples.unwrap_or(200_000)),
        Suite::Kinematic => kinematic(seed, opt.samples.unwrap_or(40_000)),
        Suite::Miles => miles(seed, opt),
        Suite::Tensor => tensor(seed, opt),
        Suite::Harmonic => harmonic(seed, opt),
        Suite::Poisson => poisson(seed, opt),
    }
}

pub fn verify(suite: Suite, opt: &VerifyOptions, out: Option<&PathBuf>) -> Result<()> {
    let checks = run_suite(suite, opt)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect();
    let report = VerifyReport {
        metadata: Metadata::current(),
        suite,
        seed: opt.seed.unwrap_or(1),
        all_pass: failed.is_empty(),
        checks: checks.clone(),
    };
    emit_json(out, &report)?;
    if out.is_some() {
        println!("{} of {} checks passed", checks.len() - failed.len(), checks.len());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Statistical(failed.join(", ")))
    }
}

fn translative(seed: u64, samples: usize) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, (name, k, m)) in fixtures::translative_pairs().into_iter().enumerate() {
        for j in 0..=2 {
            let phi = Valuation::iv(j);
            let rhs = translative_rhs(&phi, &[k.clone(), m.clone()])?;
            let est = translative_mc(&phi, &k, &m, samples, seed.wrapping_add(i as u64))?;
            out.push(CheckRecord::sigma(format!("{name}/j{j}"), est.mean[0], est.stderr[0], rhs[0]));
            if j == 0 {
                let area = minkowski_sum(&k, &reflect(&m)).area();
                out.push(CheckRecord::exact(format!("{name}/j0_difference_body"), rhs[0], area, 1e-9));
            }
        }
    }
    let triple = fixtures::iterated_triple();
    let phi = Valuation::iv(0);
    let rhs = translative_rhs(&phi, &triple)?;
    let est = iterated_translative_mc(&phi, &triple, samples, seed.wrapping_add(100))?;
    out.push(CheckRecord::sigma("iterated_k3/j0".into(), est.mean[0], est.stderr[0], rhs[0]));
    Ok(out)
}

fn kinematic(seed: u64, samples: usize) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (i, (name, k, m)) in fixtures::kinematic_pairs().into_iter().enumerate() {
        for j in 0..=2 {
            let rhs = pkf_rhs(j, &k, &m)?;
            let est = kinematic_mc(&Valuation::iv(j), &k, &m, samples, seed.wrapping_add(i as u64))?;
            out.push(CheckRecord::sigma(format!("{name}/j{j}"), est.mean[0], est.stderr[0], rhs));
        }
    }
    Ok(out)
}

fn model_or(opt: &VerifyOptions, default: fn() -> BooleanModelSpec) -> BooleanModelSpec {
    opt.model.clone().unwrap_or_else(default)
}

fn channel_checks(
    spec: &BooleanModelSpec,
    seed: u64,
    reps: usize,
    channels: &ChannelSpec,
    keep: impl Fn(&str) -> bool,
) -> Result<(Vec<CheckRecord>, boolval::estimate::DensityReport)> {
    let report = estimate_densities(spec, reps, seed, channels)?;
    let predicted = miles_forward(&grain_process_densities(spec, channels)?);
    let out = compare_reports(&report, &predicted)?
        .into_iter()
        .filter(|c| keep(&c.label))
        .map(|c| {
            let pass = c.passes(SIGMAS);
            CheckRecord {
                id: c.label,
                lhs: c.estimate,
                rhs: c.predicted,
                stderr: c.stderr,
                pass,
            }
        })
        .collect();
    Ok((out, report))
}

fn miles(seed: u64, opt: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let spec = model_or(opt, fixtures::disks);
    let channels = opt.channels.clone().unwrap_or_else(ChannelSpec::intrinsic_only);
    let (mut out, report) = channel_checks(&spec, seed, opt.reps.unwrap_or(2000), &channels, |_| true)?;
    if spec.grain.is_isotropic() {
        let fit = invert_isotropic(&report)?;
        out.push(CheckRecord::sigma("gamma_isotropic".into(), fit.gamma, fit.gamma_stderr, spec.gamma));
    }
    Ok(out)
}

fn tensor(seed: u64, opt: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let spec = model_or(opt, fixtures::disks);
    let s_max = opt.s_max.unwrap_or(4);
    let channels = ChannelSpec {
        s_max: Some(s_max),
        ..ChannelSpec::intrinsic_only()
    };
    let report = estimate_densities(&spec, opt.reps.unwrap_or(2000), seed, &channels)?;
    let mut out = Vec::new();
    for j in 0..=1 {
        for s in 1..=s_max {
            let r = tensor_isotropy_check(&report, j, s)?;
            for (i, ((m, p), se)) in r.measured.iter().zip(&r.predicted).zip(&r.stderr).enumerate() {
                out.push(CheckRecord::sigma(format!("phi{j}_r0_s{s}_{i}"), *m, *se, *p));
            }
        }
    }
    Ok(out)
}

fn harmonic(seed: u64, opt: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let spec = model_or(opt, fixtures::squares);
    let channels = ChannelSpec {
        l_max: Some(opt.l_max.unwrap_or(8)),
        ..ChannelSpec::intrinsic_only()
    };
    let (out, _) = channel_checks(&spec, seed, opt.reps.unwrap_or(2000), &channels, |l| l.starts_with("v1_l"))?;
    Ok(out)
}

fn poisson(seed: u64, opt: &VerifyOptions) -> Result<Vec<CheckRecord>> {
    let spec = model_or(opt, fixtures::squares);
    // the largest axis-parallel box keeping every hitting grain in the window
    let b = spec.window.bbox();
    let r = spec.grain.r_max() * (1.0 + 1e-6) + 1e-9;
    let (lo, hi) = (b.min + Vec2::new(r, r), b.max - Vec2::new(r, r));
    if lo.x >= hi.x || lo.y >= hi.y {
        return Err(CliError::Usage("window is too small for the hitting-count test".into()));
    }
    let c = ConvexPolygon::rect_at(lo, hi);
    let theory = hitting_intensity(&spec, &c);
    let counts = hitting_count(&spec, &c, opt.reps.unwrap_or(5000), seed)?;
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    let var = counts.iter().map(|&k| (k as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(vec![
        CheckRecord::sigma("mean_count".into(), mean, (var / n).sqrt(), theory),
        CheckRecord::sigma("dispersion_index".into(), var / mean, ((2.0 + 1.0 / mean) / n).sqrt(), 1.0),
    ])
}
