use crate::geom2d::{area_measure, support, ConvexPolygon};

/// Mixed area `V(K, M) = ½ ∫ h(K, u) S_1(M, du)`.
///
/// Zero if either body is empty.
pub fn mixed_area(k: &ConvexPolygon, m: &ConvexPolygon) -> f64 {
    if k.is_empty() || m.is_empty() {
        return 0.0;
    }
    0.5 * area_measure(m, 1)
        .atoms()
        .iter()
        .map(|&(theta, len)| len * support(k, theta).expect("nonempty"))
        .sum::<f64>()
}
