//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! failure status if any criterion fails.

use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::Instant;

use boolval::boolmodel::{
    hitting_count, hitting_intensity, sample_replicate, union_valuation, union_valuation_exhaustive,
    BooleanModelSpec, GrainModel, OrientationLaw, DEFAULT_NODE_CAP,
};
use boolval::estimate::{
    compare_reports, estimate_densities, grain_process_densities, invert_isotropic, invert_kernel,
    invert_series, miles_forward, tensor_isotropy_check, window_bias_identity, ChannelSpec,
    DensityReport, FitMethod,
};
use boolval::fixtures;
use boolval::geom2d::{area_measure, intersect, minkowski_sum, reflect, ConvexPolygon, Vec2, Window};
use boolval::integral::{
    enumerate_mix, iterated_translative_mc, kernel_mixed_area, kinematic_mc, pkf_rhs, translative_mc,
    translative_rhs, McEstimate,
};
use boolval::valuations::{mixed_area, Valuation, ValuationSet};

const SIGMAS: f64 = 3.0;
const REPS: usize = 2000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Collects failures; the first line of detail is kept for the summary.
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn new() -> Self {
        Self { failures: Vec::new(), count: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn within(&mut self, name: &str, est: f64, se: f64, truth: f64) {
        let ok = (est - truth).abs() <= SIGMAS * se + 1e-12 * (1.0 + truth.abs());
        self.check(ok, || format!("{name}: {est:.6} ± {se:.2e} vs {truth:.6}"));
    }

    fn finish(self, summary: String) -> Outcome {
        if self.failures.is_empty() {
            Ok(format!("{} checks; {summary}", self.count))
        } else {
            Err(format!("{}/{} failed: {}", self.failures.len(), self.count, self.failures.join("; ")))
        }
    }
}

fn mc_within(c: &mut Checks, name: &str, est: &McEstimate, truth: &[f64]) {
    for (i, t) in truth.iter().enumerate() {
        c.within(name, est.mean[i], est.stderr[i], *t);
    }
}

fn disk_report() -> &'static DensityReport {
    static R: OnceLock<DensityReport> = OnceLock::new();
    R.get_or_init(|| estimate_densities(&fixtures::disks(), REPS, 1, &ChannelSpec::default()).unwrap())
}

fn square_report() -> &'static DensityReport {
    static R: OnceLock<DensityReport> = OnceLock::new();
    R.get_or_init(|| estimate_densities(&fixtures::squares(), REPS, 2, &ChannelSpec::default()).unwrap())
}

fn forward(spec: &BooleanModelSpec) -> DensityReport {
    miles_forward(&grain_process_densities(spec, &ChannelSpec::default()).unwrap())
}

fn translative_identity() -> Outcome {
    let mut c = Checks::new();
    let mut worst = 0.0f64;
    for (i, (name, k, m)) in fixtures::translative_pairs().into_iter().enumerate() {
        for j in 0..=2 {
            let phi = Valuation::iv(j);
            let rhs = translative_rhs(&phi, &[k.clone(), m.clone()]).unwrap();
            let est = translative_mc(&phi, &k, &m, 200_000, 100 + i as u64).unwrap();
            mc_within(&mut c, &format!("{name} j={j}"), &est, &rhs);
            if j == 0 {
                let area = minkowski_sum(&k, &reflect(&m)).area();
                let rel = (rhs[0] - area).abs() / area;
                worst = worst.max(rel);
                c.check(rel <= 1e-9, || format!("{name}: V_0 split {} vs area {area}", rhs[0]));
            }
        }
    }
    c.finish(format!("j=0 vs area(K ⊕ −M) max rel err {worst:.1e}"))
}

fn iterated_translative() -> Outcome {
    let mut c = Checks::new();
    let bodies = fixtures::iterated_triple();
    let terms = enumerate_mix(0, 3, 2).unwrap().len();
    c.check(terms == 6, || format!("mix(0,3) has {terms} terms"));
    let rhs = translative_rhs(&Valuation::iv(0), &bodies).unwrap();
    let est = iterated_translative_mc(&Valuation::iv(0), &bodies, 200_000, 7).unwrap();
    mc_within(&mut c, "k=3 j=0", &est, &rhs);
    c.finish(format!("MC {:.4} ± {:.4}, split {:.4}", est.mean[0], est.stderr[0], rhs[0]))
}

fn kinematic() -> Outcome {
    let mut c = Checks::new();
    let mut disk = String::new();
    for (i, (name, k, m)) in fixtures::kinematic_pairs().into_iter().enumerate() {
        for j in 0..=2 {
            let rhs = pkf_rhs(j, &k, &m).unwrap();
            let est = kinematic_mc(&Valuation::iv(j), &k, &m, 40_000, 200 + i as u64).unwrap();
            mc_within(&mut c, &format!("{name} j={j}"), &est, &[rhs]);
            if name == "unit-disks" && j == 0 {
                // the 256-gon falls short of the disk by a known polygonal deficit
                let deficit = (4.0 * PI - rhs).abs();
                c.check(deficit < 1e-3, || format!("pkf for unit disks {rhs} vs 4π"));
                let ok = (est.mean[0] - 4.0 * PI).abs() <= SIGMAS * est.stderr[0] + deficit;
                c.check(ok, || format!("disk MC {} ± {} vs 4π", est.mean[0], est.stderr[0]));
                disk = format!("disks j=0 MC {:.4} ± {:.4} vs 4π = {:.4}", est.mean[0], est.stderr[0], 4.0 * PI);
            }
        }
    }
    c.finish(disk)
}

fn poisson_hitting() -> Outcome {
    let mut c = Checks::new();
    let spec = fixtures::squares();
    let side = 0.3;
    let cell = ConvexPolygon::square(side).translate(Vec2::new(0.35, 0.35));
    let theory = spec.gamma * (0.1 + side) * (0.1 + side);
    let exact = hitting_intensity(&spec, &cell);
    c.check((exact - theory).abs() < 1e-12, || format!("hitting intensity {exact} vs {theory}"));
    let counts = hitting_count(&spec, &cell, 5000, 4).unwrap();
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<usize>() as f64 / n;
    let var = counts.iter().map(|&k| (k as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    c.within("mean count", mean, (var / n).sqrt(), theory);
    let disp = var / mean;
    c.within("dispersion index", disp, ((2.0 + 1.0 / mean) / n).sqrt(), 1.0);
    c.finish(format!("mean {mean:.4} vs {theory:.4}, dispersion {disp:.4}"))
}

fn miles() -> Outcome {
    let mut c = Checks::new();
    let rep = disk_report();
    let pred = forward(&fixtures::disks());
    let closed = [20.51, 5.304, 0.3248];
    let mut line = Vec::new();
    for j in 0..=2 {
        let e = rep.get(&format!("v{j}")).unwrap();
        let p = pred.v(j).unwrap();
        c.within(&format!("V_{j}(Z)"), e.mean, e.stderr, p);
        let digits = [1e-2, 1e-3, 1e-4][j];
        c.check((p - closed[j]).abs() < digits, || format!("closed form V_{j} {p} vs {}", closed[j]));
        line.push(format!("V{j} {:.4} ± {:.4} (pred {:.4})", e.mean, e.stderr, p));
    }
    c.finish(line.join(", "))
}

fn isotropic_inversion() -> Outcome {
    let mut c = Checks::new();
    let fit = invert_isotropic(disk_report()).unwrap();
    c.within("γ̂", fit.gamma, fit.gamma_stderr, 50.0);
    let exact = invert_isotropic(&forward(&fixtures::disks())).unwrap();
    let rel = (exact.gamma - 50.0).abs() / 50.0;
    c.check(rel <= 1e-9, || format!("round trip {}", exact.gamma));
    c.finish(format!("γ̂ = {:.3} ± {:.3}, round-trip rel err {rel:.1e}", fit.gamma, fit.gamma_stderr))
}

fn kernel_inversion() -> Outcome {
    let mut c = Checks::new();
    let fit = invert_kernel(square_report()).unwrap();
    c.check(fit.method == FitMethod::Kernel, || format!("method {:?}", fit.method));
    c.within("γ̂", fit.gamma, fit.gamma_stderr, 30.0);
    let d = grain_process_densities(&fixtures::squares(), &ChannelSpec::default()).unwrap();
    let z = miles_forward(&d);
    let exact = invert_kernel(&z).unwrap();
    let rho = 1.0 / (1.0 - z.v(2).unwrap());
    let (first, second) = (rho * z.v(0).unwrap(), exact.gamma - rho * z.v(0).unwrap());
    c.check((exact.gamma - 30.0).abs() <= 30e-9, || format!("round trip {}", exact.gamma));
    c.check((first - 21.0).abs() < 1e-9 && (second - 9.0).abs() < 1e-9, || format!("{first} + {second}"));
    let series = invert_series(&z, 8).unwrap();
    let bound = series.truncation_bound.unwrap();
    let gap = (series.gamma - exact.gamma).abs();
    c.check(gap <= bound, || format!("series l≤8 off by {gap} > bound {bound}"));
    c.finish(format!(
        "γ̂ = {:.3} ± {:.3}; exact {first:.6} + {second:.6}; series gap {gap:.2e} ≤ {bound:.2e}",
        fit.gamma, fit.gamma_stderr
    ))
}

fn tensor_isotropy() -> Outcome {
    let mut c = Checks::new();
    let rep = disk_report();
    let t = tensor_isotropy_check(rep, 1, 2).unwrap();
    c.check(t.passes(SIGMAS), || format!("Φ_1^{{0,2}} residual {:?} stderr {:?}", t.residual(), t.stderr));
    for j in 0..=1 {
        for s in [1, 3] {
            let r = tensor_isotropy_check(rep, j, s).unwrap();
            c.check(r.passes(SIGMAS), || format!("Φ_{j}^{{0,{s}}} = {:?} ± {:?}", r.measured, r.stderr));
        }
    }
    c.finish(format!("Φ_1^(0,2) = {:?} vs {:?}", round4(&t.measured), round4(&t.predicted)))
}

fn round4(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}

fn harmonic_channel() -> Outcome {
    let mut c = Checks::new();
    let pred = forward(&fixtures::squares());
    for ch in compare_reports(square_report(), &pred).unwrap() {
        let Some(rest) = ch.label.strip_prefix("v1_l") else { continue };
        let l: u32 = rest.split('_').next().unwrap().parse().unwrap();
        if l <= 8 {
            c.check(ch.passes(SIGMAS), || format!("squares {}: {} ± {} vs {}", ch.label, ch.estimate, ch.stderr, ch.predicted));
        }
    }
    for e in &disk_report().values {
        if e.label.starts_with("v1_l") {
            c.within(&format!("disks {}", e.label), e.mean, e.stderr, 0.0);
        }
    }
    let l4 = square_report().get(&DensityReport::harmonic_label(4, 1)).unwrap();
    c.finish(format!(
        "squares V_1^(4,1) {:.4} ± {:.4} vs {:.4}",
        l4.mean,
        l4.stderr,
        pred.mean(&l4.label).unwrap()
    ))
}

fn window_bias() -> Outcome {
    let mut c = Checks::new();
    let k = ConvexPolygon::square(1.0);
    let mut line = Vec::new();
    for (name, spec, rep) in [("disks", fixtures::disks(), disk_report()), ("squares", fixtures::squares(), square_report())] {
        for j in 0..=1 {
            let r = window_bias_identity(&spec, rep, &k, j, REPS, 3).unwrap();
            c.check(r.passes(SIGMAS), || format!("{name} j={j}: {r:?}"));
            line.push(format!("{name} j={j} {:.3}/{:.3}", r.lhs, r.rhs));
        }
    }
    c.finish(line.join(", "))
}

fn exactness() -> Outcome {
    let mut c = Checks::new();
    let phi = ValuationSet::new(vec![
        Valuation::iv(0),
        Valuation::iv(1),
        Valuation::iv(2),
        Valuation::Harmonic { j: 1, l: 2, p: 1 },
        Valuation::Harmonic { j: 1, l: 3, p: 2 },
        Valuation::Tensor { j: 1, r: 0, s: 2 },
        Valuation::Tensor { j: 0, r: 1, s: 1 },
        Valuation::support_grid(4),
    ])
    .unwrap();
    // pruned vs exhaustive inclusion–exclusion
    let tri = ConvexPolygon::from_flat(&[0.0, 0.0, 0.3, 0.05, 0.1, 0.25]).unwrap();
    let laws = [
        GrainModel::single(tri, OrientationLaw::Uniform).unwrap(),
        GrainModel::single(ConvexPolygon::square(0.25), OrientationLaw::Fixed).unwrap(),
        GrainModel::single(ConvexPolygon::regular_ngon(16, 0.15), OrientationLaw::Uniform).unwrap(),
    ];
    let k0 = ConvexPolygon::square(1.0);
    let mut fixtures_seen = 0;
    for (li, g) in laws.into_iter().enumerate() {
        let spec = BooleanModelSpec::new(7.0, g, Window::unit_square()).unwrap();
        for i in 0..60 {
            let r = sample_replicate(&spec, 50 + li as u64, i).unwrap();
            if r.grains.len() > 12 {
                continue;
            }
            fixtures_seen += 1;
            let placed = r.placed();
            let a = union_valuation(&placed, &k0, &phi, DEFAULT_NODE_CAP).unwrap();
            let b = union_valuation_exhaustive(&placed, &k0, &phi);
            let ok = a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-10 * (1.0 + y.abs()));
            c.check(ok, || format!("IE mismatch law {li} rep {i}"));
        }
    }
    // additivity over a cut
    let wedges = [
        ConvexPolygon::from_flat(&[0.0, 0.0, 1.0, 0.2, 0.3, 0.9]).unwrap(),
        ConvexPolygon::regular_ngon(7, 1.0).translate(Vec2::new(0.2, 0.1)),
        ConvexPolygon::rect(2.0, 0.5),
    ];
    for (wi, k) in wedges.iter().enumerate() {
        for &(theta, off) in &[(0.3, 0.1), (1.2, -0.05), (2.5, 0.2)] {
            let u = Vec2::from_angle(theta);
            let n = Vec2::new(-u.y, u.x);
            let p = n * off + k.vertices().iter().fold(Vec2::ZERO, |a, v| a + *v) * (1.0 / k.len() as f64);
            let big = 100.0;
            let half = |s: f64| {
                ConvexPolygon::convex_hull(&[p - u * big, p + u * big, p + u * big + n * (s * big), p - u * big + n * (s * big)])
            };
            let line = ConvexPolygon::segment(p - u * big, p + u * big);
            let (kp, km, kl) = (intersect(k, &half(1.0)), intersect(k, &half(-1.0)), intersect(k, &line));
            let (vk, vp, vm, vl) = (phi.eval(k), phi.eval(&kp), phi.eval(&km), phi.eval(&kl));
            let err = (0..vk.len()).map(|i| (vk[i] - vp[i] - vm[i] + vl[i]).abs()).fold(0.0, f64::max);
            c.check(err <= 1e-10, || format!("wedge {wi} θ={theta}: additivity error {err:.2e}"));
        }
    }
    // exact kernel against the reflected mixed area
    let mut worst = 0.0f64;
    for (name, k, m) in fixtures::translative_pairs() {
        let a = kernel_mixed_area(&area_measure(&k, 1), &area_measure(&m, 1));
        let b = mixed_area(&k, &reflect(&m));
        worst = worst.max((a - b).abs());
        c.check((a - b).abs() <= 1e-9, || format!("{name}: kernel {a} vs {b}"));
    }
    c.finish(format!("{fixtures_seen} IE fixtures, kernel max err {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("translative identity, k = 2", translative_identity),
        ("iterated translative identity, k = 3", iterated_translative),
        ("principal kinematic formula", kinematic),
        ("Poisson hitting counts", poisson_hitting),
        ("Miles formulas, isotropic disks", miles),
        ("isotropic intensity inversion", isotropic_inversion),
        ("non-isotropic recovery via kernel", kernel_inversion),
        ("tensor isotropy", tensor_isotropy),
        ("area-measure harmonic channel", harmonic_channel),
        ("window-bias identity", window_bias),
        ("exactness backbone", exactness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("criterion {:>2} PASS  {name} [{secs:.1}s]: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.1}s]: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
