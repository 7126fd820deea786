//! Orientation predicate and strict segment crossing.

pub type Point2 = [f64; 2];

/// Twice the signed area of triangle `(a, b, c)`; positive when counterclockwise.
#[inline]
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Proper crossing of segments `uv` and `wx`. Touching, collinear overlap and
/// shared endpoints do not count.
#[inline]
pub fn segments_cross(u: Point2, v: Point2, w: Point2, x: Point2) -> bool {
    orient(u, v, w) * orient(u, v, x) < 0.0 && orient(w, x, u) * orient(w, x, v) < 0.0
}
