use std::f64::consts::TAU;

/// Map an angle to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// `∫_{t0}^{t1} cos^a(θ) sin^b(θ) dθ` in closed form.
///
/// Uses the standard reduction formulas
/// `I(a,b) = [cos^{a-1} sin^{b+1}]/(a+b) + (a-1)/(a+b) I(a-2,b)` and
/// `I(a,b) = -[cos^{a+1} sin^{b-1}]/(a+b) + (b-1)/(a+b) I(a,b-2)`.
pub fn arc_moment(a: u32, b: u32, t0: f64, t1: f64) -> f64 {
    let (s0, c0) = t0.sin_cos();
    let (s1, c1) = t1.sin_cos();
    moment(a, b, (c0, s0), (c1, s1), t1 - t0)
}

fn moment(a: u32, b: u32, p0: (f64, f64), p1: (f64, f64), width: f64) -> f64 {
    let bracket = |ea: i32, eb: i32| -> f64 {
        p1.0.powi(ea) * p1.1.powi(eb) - p0.0.powi(ea) * p0.1.powi(eb)
    };
    match (a, b) {
        (0, 0) => width,
        (1, 0) => bracket(0, 1),
        (0, 1) => -bracket(1, 0),
        (1, 1) => 0.5 * bracket(0, 2),
        _ if a >= 2 => {
            let n = (a + b) as f64;
            bracket(a as i32 - 1, b as i32 + 1) / n
                + (a - 1) as f64 / n * moment(a - 2, b, p0, p1, width)
        }
        _ => {
            let n = (a + b) as f64;
            -bracket(a as i32 + 1, b as i32 - 1) / n
                + (b - 1) as f64 / n * moment(a, b - 2, p0, p1, width)
        }
    }
}
