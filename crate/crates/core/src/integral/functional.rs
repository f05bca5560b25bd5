use std::f64::consts::{PI, TAU};

use super::mix::{enumerate_mix, MixedIndex};
use crate::error::{Error, Result};
use crate::geom2d::{
    area_measure, normalize_angle, reflect, support_integral, ConvexPolygon, SphereMeasure, Vec2,
};
use crate::valuations::{mixed_area, Valuation};

/// `V_{1,1}(K, M) = 2 V(K, −M)`.
pub fn v11(k: &ConvexPolygon, m: &ConvexPolygon) -> f64 {
    2.0 * mixed_area(k, &reflect(m))
}

/// Mixed functional `φ_m(K_1, …, K_k)` in the plane.
///
/// Every entry equal to 2 splits off a `V_2` factor of its body. What is left
/// is either a single `φ(K_i)` or, for degree-0 valuations, the pair
/// `φ({0})·V_{1,1}(K_a, K_b)`.
pub fn mixed_functional(
    phi: &Valuation,
    m: &MixedIndex,
    bodies: &[ConvexPolygon],
) -> Result<Vec<f64>> {
    let j = phi
        .degree()
        .ok_or_else(|| Error::invalid("phi", "mixed functionals need a translation-invariant valuation"))?;
    if m.len() != bodies.len() {
        return Err(Error::invalid("m", format!("{} entries for {} bodies", m.len(), bodies.len())));
    }
    if m.entries().iter().any(|&e| e < j || e > 2) || m.type_in(2) != j as i64 {
        return Err(Error::invalid("m", format!("{m} is not in mix({j}, {})", m.len())));
    }
    let mut factor = 1.0;
    let mut core: Vec<usize> = Vec::new();
    for (i, &e) in m.entries().iter().enumerate() {
        if e == 2 {
            factor *= bodies[i].area();
        } else {
            core.push(i);
        }
    }
    match core.as_slice() {
        [] => {
            // φ ∈ Val_2: keep the first body as the core
            let rest = bodies[1..].iter().map(ConvexPolygon::area).product();
            Ok(scaled(phi.eval(&bodies[0]), rest))
        }
        [i] => Ok(scaled(phi.eval(&bodies[*i]), factor)),
        [a, b] if j == 0 => {
            let unit = phi.eval(&ConvexPolygon::point(Vec2::ZERO));
            Ok(scaled(unit, factor * v11(&bodies[*a], &bodies[*b])))
        }
        _ => Err(Error::invalid("m", format!("{m} has no planar splitting"))),
    }
}

fn scaled(mut v: Vec<f64>, f: f64) -> Vec<f64> {
    for x in &mut v {
        *x *= f;
    }
    v
}

/// `V_m(K_1, …, K_k)` for the intrinsic volume of degree `type(m)`.
pub fn mixed_functional_v(m: &MixedIndex, bodies: &[ConvexPolygon]) -> Result<f64> {
    let j = m.type_in(2);
    if !(0..=2).contains(&j) {
        return Err(Error::invalid("m", format!("{m} has type {j}")));
    }
    Ok(mixed_functional(&Valuation::iv(j as usize), m, bodies)?[0])
}

/// Mean of `V_{1,1}(ϑK, M)` over rotations, integrating exactly on each of
/// `order` equal angular cells.
pub fn rotation_average_v11(k: &ConvexPolygon, m: &ConvexPolygon, order: usize) -> f64 {
    // V_{1,1}(ϑ_θ K, M) = Σ_{(φ,l) ∈ S_1(−M)} l·h(K, u(φ − θ))
    let atoms = area_measure(&reflect(m), 1);
    let mut total = 0.0;
    for i in 0..order {
        let (t0, t1) = (TAU * i as f64 / order as f64, TAU * (i + 1) as f64 / order as f64);
        for &(phi, l) in atoms.atoms() {
            total += l * support_integral(k, phi - t1, phi - t0);
        }
    }
    total / TAU
}

/// Right-hand side of the iterated translative formula:
/// `Σ_{m ∈ mix(j, k)} φ_m(K_1, …, K_k)`.
pub fn translative_rhs(phi: &Valuation, bodies: &[ConvexPolygon]) -> Result<Vec<f64>> {
    let j = phi
        .degree()
        .ok_or_else(|| Error::invalid("phi", "translative formulas need a translation-invariant valuation"))?;
    let mut acc = vec![0.0; phi.dim()];
    for m in enumerate_mix(j, bodies.len(), 2)? {
        for (a, v) in acc.iter_mut().zip(mixed_functional(phi, &m, bodies)?) {
            *a += v;
        }
    }
    Ok(acc)
}

/// `G(t) = (π − t) sin t / 2π` on `[0, 2π)`, extended periodically.
///
/// `G'' + G = δ₀ − cos/π`, so `G` inverts `h ↦ h'' + h` on functions without
/// first harmonics.
fn green(t: f64) -> f64 {
    let t = normalize_angle(t);
    (PI - t) * t.sin() / TAU
}

/// Bilinear form `B(μ, ν) = ½ ∬ G(β − α + π) μ(dα) ν(dβ)`.
///
/// For `μ = S_1(K)`, `ν = S_1(M)` this is `V(K, −M)` exactly. Uniform parts
/// use `∫G = 1`.
pub fn kernel_mixed_area(mu: &SphereMeasure, nu: &SphereMeasure) -> f64 {
    let mut b = 0.0;
    for &(a, wa) in mu.atoms() {
        for &(c, wc) in nu.atoms() {
            b += wa * wc * green(c - a + PI);
        }
    }
    let atoms = |m: &SphereMeasure| m.atoms().iter().map(|x| x.1).sum::<f64>();
    0.5 * b
        + 0.5 * mu.density() * atoms(nu)
        + 0.5 * nu.density() * atoms(mu)
        + PI * mu.density() * nu.density()
}

/// `(1/8) ∬ |sin(α − β)| μ(dα) ν(dβ)`.
///
/// Equals `½[V(K, M) + V(K, −M)]` on area measures, hence agrees with
/// [`kernel_mixed_area`] whenever one body is centrally symmetric.
pub fn symmetric_kernel_mixed_area(mu: &SphereMeasure, nu: &SphereMeasure) -> f64 {
    let mut b = 0.0;
    for &(a, wa) in mu.atoms() {
        for &(c, wc) in nu.atoms() {
            b += wa * wc * (a - c).sin().abs();
        }
    }
    let atoms = |m: &SphereMeasure| m.atoms().iter().map(|x| x.1).sum::<f64>();
    b / 8.0
        + 0.5 * mu.density() * atoms(nu)
        + 0.5 * nu.density() * atoms(mu)
        + PI * mu.density() * nu.density()
}
