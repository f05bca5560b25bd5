use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use boolval::boolmodel::{hitting_intensity, sample_replicate, BooleanModelSpec, Realization};
use boolval::estimate::{
    estimate_densities_rows, harmonic_series_constants, invert_isotropic, invert_kernel, ChannelSpec,
    DensityReport, FitResult, SeriesConstant,
};
use boolval::geom2d::intersect;
use boolval::integral::enumerate_mix;
use boolval::valuations::ConstantsTable;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{emit_json, ensure_dir, write_csv, write_json, Metadata};

const DEFAULT_L_MAX: u32 = 16;
const DEFAULT_S_MAX: usize = 4;
const DEFAULT_SUPPORT_ANGLES: usize = 16;

/// Settings shared by the commands that run a configured experiment.
pub struct Run {
    pub cfg: ExperimentConfig,
    pub spec: BooleanModelSpec,
    pub seed: u64,
    pub reps: usize,
    pub out: PathBuf,
}

impl Run {
    pub fn new(cfg: ExperimentConfig, seed: Option<u64>, reps: Option<usize>, out: Option<PathBuf>) -> Result<Self> {
        let spec = cfg.spec()?;
        let reps = reps.unwrap_or(cfg.reps);
        if reps == 0 {
            return Err(CliError::Usage("--reps must be positive".into()));
        }
        let out = out
            .or_else(|| cfg.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("boolval-out"));
        Ok(Self {
            seed: seed.unwrap_or(cfg.seed),
            reps,
            spec,
            cfg,
            out,
        })
    }
}

/// Builds the channel selection from `--channels`, `--lmax` and `--smax`.
///
/// `V_0, V_1, V_2` are always estimated; the list picks the optional groups
/// `harmonic`, `tensor`, `support` and `atoms` (or `all`).
pub fn channel_spec(list: Option<&str>, l_max: Option<u32>, s_max: Option<usize>) -> Result<ChannelSpec> {
    let Some(list) = list else {
        return Ok(ChannelSpec {
            l_max: Some(l_max.unwrap_or(DEFAULT_L_MAX)),
            s_max: Some(s_max.unwrap_or(DEFAULT_S_MAX)),
            ..ChannelSpec::default()
        });
    };
    let mut spec = ChannelSpec::intrinsic_only();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok {
            "v0" | "v1" | "v2" => {}
            "harmonic" => spec.l_max = Some(l_max.unwrap_or(DEFAULT_L_MAX)),
            "tensor" => spec.s_max = Some(s_max.unwrap_or(DEFAULT_S_MAX)),
            "support" => spec.support_angles = DEFAULT_SUPPORT_ANGLES,
            "atoms" => spec.atoms = true,
            "all" => {
                spec = channel_spec(None, l_max, s_max)?;
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown channel group `{other}` (expected v0, v1, v2, harmonic, tensor, support, atoms or all)"
                )))
            }
        }
    }
    Ok(spec)
}

#[derive(Serialize)]
struct SimulateSummary {
    metadata: Metadata,
    seed: u64,
    reps: usize,
    gamma: f64,
    /// Mean number of germs in the window dilated by the largest grain radius.
    expected_grains: f64,
    mean_grains: f64,
    grains_stderr: f64,
    expected_hitting: f64,
    mean_hitting: f64,
    hitting_stderr: f64,
    realizations: Vec<String>,
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

pub fn simulate(run: &Run) -> Result<()> {
    let dir = run.out.join("realizations");
    ensure_dir(&dir)?;
    let reals: Vec<Realization> = (0..run.reps as u64)
        .into_par_iter()
        .map(|i| sample_replicate(&run.spec, run.seed, i))
        .collect::<boolval::Result<_>>()?;
    let window = run.spec.window.polygon();
    let mut names = Vec::with_capacity(reals.len());
    let mut rows = Vec::with_capacity(reals.len());
    let (mut grains, mut hitting) = (Vec::new(), Vec::new());
    for (i, r) in reals.iter().enumerate() {
        let name = format!("rep_{i:05}.json");
        write_json(&dir.join(&name), r)?;
        names.push(format!("realizations/{name}"));
        let hits = r.grains.iter().filter(|g| !intersect(window, &g.placed()).is_empty()).count();
        grains.push(r.grains.len() as f64);
        hitting.push(hits as f64);
        rows.push(vec![
            i.to_string(),
            r.seed.seed.to_string(),
            r.seed.stream.to_string(),
            r.seed.index.to_string(),
            r.grains.len().to_string(),
            hits.to_string(),
        ]);
    }
    let header = ["rep", "seed", "stream", "index", "grains", "hitting_window"].map(String::from);
    write_csv(&run.out.join("replications.csv"), &header, rows)?;
    let (mean_grains, grains_stderr) = mean_stderr(&grains);
    let (mean_hitting, hitting_stderr) = mean_stderr(&hitting);
    let summary = SimulateSummary {
        metadata: Metadata::current(),
        seed: run.seed,
        reps: run.reps,
        gamma: run.spec.gamma,
        expected_grains: run.spec.expected_germs(),
        mean_grains,
        grains_stderr,
        expected_hitting: hitting_intensity(&run.spec, window),
        mean_hitting,
        hitting_stderr,
        realizations: names,
    };
    write_json(&run.out.join("summary.json"), &summary)?;
    println!(
        "simulated {} realizations: mean grain count {:.3} ± {:.3} (expected {:.3})",
        run.reps, summary.mean_grains, summary.grains_stderr, summary.expected_grains
    );
    Ok(())
}

#[derive(Serialize)]
struct ReportFile<'a> {
    metadata: Metadata,
    config: &'a ExperimentConfig,
    report: &'a DensityReport,
}

/// One intensity fit with its standing under the configured grain law.
#[derive(Serialize)]
struct FitEntry {
    method: &'static str,
    status: &'static str,
    /// True when the method's assumptions do not hold for the grain law.
    misspecified: bool,
    authoritative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<FitResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct FitsFile {
    metadata: Metadata,
    isotropic_law: bool,
    fits: Vec<FitEntry>,
}

fn entry(method: &'static str, fit: &boolval::Result<FitResult>, misspecified: bool, authoritative: bool) -> FitEntry {
    FitEntry {
        method,
        status: if fit.is_ok() { "ok" } else { "failed" },
        misspecified,
        authoritative,
        result: fit.as_ref().ok().cloned(),
        error: fit.as_ref().err().map(ToString::to_string),
    }
}

pub fn estimate(run: &Run, channels: &ChannelSpec) -> Result<()> {
    if run.reps < 2 {
        return Err(CliError::Usage("estimation needs --reps of at least 2".into()));
    }
    ensure_dir(&run.out)?;
    let est = estimate_densities_rows(&run.spec, run.reps, run.seed, channels)?;
    write_json(
        &run.out.join("report.json"),
        &ReportFile {
            metadata: Metadata::current(),
            config: &run.cfg,
            report: &est.report,
        },
    )?;
    let mut header = vec!["rep".to_string()];
    header.extend(est.labels.iter().cloned());
    let rows = est.rows.iter().enumerate().map(|(i, r)| {
        std::iter::once(i.to_string())
            .chain(r.iter().map(|x| format!("{x:e}")))
            .collect()
    });
    write_csv(&run.out.join("replications.csv"), &header, rows)?;

    let isotropic_law = run.spec.grain.is_isotropic();
    let iso = invert_isotropic(&est.report);
    let kernel = invert_kernel(&est.report);
    let kernel_ok = kernel.is_ok();
    let fits = FitsFile {
        metadata: Metadata::current(),
        isotropic_law,
        fits: vec![
            entry("isotropic", &iso, !isotropic_law, !kernel_ok && isotropic_law),
            entry("kernel", &kernel, false, kernel_ok),
        ],
    };
    write_json(&run.out.join("fits.json"), &fits)?;
    for f in &fits.fits {
        match (&f.result, &f.error) {
            (Some(r), _) => println!(
                "{:>9}: gamma = {:.4} ± {:.4}{}",
                f.method,
                r.gamma,
                r.gamma_stderr,
                if f.misspecified { " (misspecified for this grain law)" } else { "" }
            ),
            (_, Some(e)) => println!("{:>9}: {e}", f.method),
            _ => {}
        }
    }
    // saturation makes the data uninformative; everything else is reported
    for fit in [iso, kernel] {
        if let Err(e @ boolval::Error::SaturatedCoverage { .. }) = fit {
            return Err(e.into());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstantsFile {
    metadata: Metadata,
    s_max: usize,
    l_max: u32,
    table: ConstantsTable,
    series_constants: Vec<SeriesConstant>,
}

pub fn constants(s_max: usize, l_max: u32, out: Option<&PathBuf>) -> Result<()> {
    let table = ConstantsTable::plane(s_max, l_max as usize)?;
    emit_json(
        out,
        &ConstantsFile {
            metadata: Metadata::current(),
            s_max,
            l_max,
            table,
            series_constants: harmonic_series_constants(l_max),
        },
    )
}

#[derive(Serialize)]
struct MixEntry {
    j: usize,
    k: usize,
    count: usize,
    indices: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct MixFile {
    metadata: Metadata,
    n: usize,
    entries: Vec<MixEntry>,
}

pub fn mix(k_max: usize, out: Option<&PathBuf>) -> Result<()> {
    if k_max == 0 {
        return Err(CliError::Usage("--kmax must be positive".into()));
    }
    let mut entries = Vec::new();
    for k in 1..=k_max {
        for j in 0..=2 {
            let idx = enumerate_mix(j, k, 2)?;
            entries.push(MixEntry {
                j,
                k,
                count: idx.len(),
                indices: idx.into_iter().map(|m| m.0).collect(),
            });
        }
    }
    emit_json(
        out,
        &MixFile {
            metadata: Metadata::current(),
            n: 2,
            entries,
        },
    )
}
