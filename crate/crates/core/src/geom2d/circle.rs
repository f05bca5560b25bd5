use super::Vec2;

/// A circle given by centre and radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: Vec2) -> bool {
        p.dist(self.center) <= self.radius * (1.0 + 1e-12) + 1e-12
    }

    fn from_two(a: Vec2, b: Vec2) -> Circle {
        let center = (a + b) * 0.5;
        Circle {
            center,
            radius: a.dist(center),
        }
    }

    fn from_three(a: Vec2, b: Vec2, c: Vec2) -> Option<Circle> {
        let ab = b - a;
        let ac = c - a;
        let d = 2.0 * ab.cross(ac);
        if d.abs() < 1e-300 {
            return None;
        }
        let ux = (ac.y * ab.norm_sq() - ab.y * ac.norm_sq()) / d;
        let uy = (ab.x * ac.norm_sq() - ac.x * ab.norm_sq()) / d;
        let center = a + Vec2::new(ux, uy);
        Some(Circle {
            center,
            radius: center.dist(a),
        })
    }
}

/// Minimal enclosing circle (Welzl's incremental construction).
///
/// Returns `None` for an empty point set.
pub fn min_enclosing_circle(points: &[Vec2]) -> Option<Circle> {
    let first = *points.first()?;
    let mut c = Circle {
        center: first,
        radius: 0.0,
    };
    for i in 1..points.len() {
        let p = points[i];
        if c.contains(p) {
            continue;
        }
        c = Circle {
            center: p,
            radius: 0.0,
        };
        for j in 0..i {
            let q = points[j];
            if c.contains(q) {
                continue;
            }
            c = Circle::from_two(p, q);
            for &r in &points[..j] {
                if !c.contains(r) {
                    c = Circle::from_three(p, q, r).unwrap_or_else(|| {
                        // collinear: widest pair
                        [
                            Circle::from_two(p, q),
                            Circle::from_two(p, r),
                            Circle::from_two(q, r),
                        ]
                        .into_iter()
                        .max_by(|x, y| x.radius.total_cmp(&y.radius))
                        .unwrap()
                    });
                }
            }
        }
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_circumcircle() {
        let c = min_enclosing_circle(&[
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap();
        assert!(c.center.approx_eq(Vec2::new(0.5, 0.5), 1e-12));
        assert!((c.radius - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn obtuse_triangle_uses_longest_side() {
        let c = min_enclosing_circle(&[
            Vec2::new(0.0, 0.0),
            Vec2::new(4.0, 0.0),
            Vec2::new(2.0, 0.5),
        ])
        .unwrap();
        assert!(c.center.approx_eq(Vec2::new(2.0, 0.0), 1e-12));
        assert!((c.radius - 2.0).abs() < 1e-12);
    }

    #[test]
    fn right_triangle() {
        let c = min_enclosing_circle(&[
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 2.0),
        ])
        .unwrap();
        assert!(c.center.approx_eq(Vec2::new(0.5, 1.0), 1e-12));
    }
}
