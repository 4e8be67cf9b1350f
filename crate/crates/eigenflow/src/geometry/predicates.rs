//! Exact side predicates with symbolic perturbation.
//!
//! Every point `i` is treated as a weighted point whose lifted height is
//! `|x_i|^2 + eps_i`, with `eps_0 >> eps_1 >> ...`. A point is inside a sphere
//! when its perturbed power is negative. The unperturbed sign is computed
//! exactly; when it vanishes, the first-order coefficient of the
//! highest-priority (lowest index) point decides.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use robust::{incircle, orient2d, Coord};

use super::Point;

const U: f64 = f64::EPSILON * 0.5;

#[inline]
fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

fn sign_of(v: f64) -> Ordering {
    if v > 0.0 {
        Ordering::Greater
    } else if v < 0.0 {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// Exact sign of the orientation determinant of `a, b, c`.
pub fn orient(a: Point, b: Point, c: Point) -> Ordering {
    sign_of(orient2d(coord(a), coord(b), coord(c)))
}

/// Exact sign of the in-circle determinant (positive: `d` inside the circle
/// through counterclockwise `a, b, c`).
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> Ordering {
    sign_of(incircle(coord(a), coord(b), coord(c), coord(d)))
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
}

/// Exact sign of `(a - b) . (c - d)`.
pub fn dot_sign(a: Point, b: Point, c: Point, d: Point) -> Ordering {
    let x1 = a.x - b.x;
    let y1 = a.y - b.y;
    let x2 = c.x - d.x;
    let y2 = c.y - d.y;
    let t1 = x1 * x2;
    let t2 = y1 * y2;
    let v = t1 + t2;
    let bound = 8.0 * U * (t1.abs() + t2.abs());
    if v.abs() > bound && v.is_finite() {
        return sign_of(v);
    }
    let ex = (rat(a.x) - rat(b.x)) * (rat(c.x) - rat(d.x))
        + (rat(a.y) - rat(b.y)) * (rat(c.y) - rat(d.y));
    if ex.is_zero() {
        Ordering::Equal
    } else if ex.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Result of comparing a point against a sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Inside,
    On,
    Outside,
}

/// Perturbed side test of point `p` against the smallest sphere through the
/// support `r` (0 to 3 indices into `pts`). Support members are `On`.
pub fn side_perturbed(pts: &[Point], r: &[usize], p: usize) -> Side {
    if r.contains(&p) {
        return Side::On;
    }
    match r.len() {
        0 | 1 => Side::Outside,
        2 => side_diametral(pts, r[0], r[1], p),
        3 => side_circumcircle(pts, r[0], r[1], r[2], p),
        _ => panic!("support larger than d+1"),
    }
}

fn side_diametral(pts: &[Point], a: usize, b: usize, p: usize) -> Side {
    let (pa, pb, pp) = (pts[a], pts[b], pts[p]);
    // power of p: (p - a).(p - b); negative inside.
    match dot_sign(pp, pa, pp, pb) {
        Ordering::Less => return Side::Inside,
        Ordering::Greater => return Side::Outside,
        Ordering::Equal => {}
    }
    let mut order = [a, b, p];
    order.sort_unstable();
    for k in order {
        let coef = if k == p {
            Ordering::Greater
        } else if k == a {
            dot_sign(pb, pa, pb, pp).reverse()
        } else {
            dot_sign(pa, pb, pa, pp).reverse()
        };
        match coef {
            Ordering::Greater => return Side::Outside,
            Ordering::Less => return Side::Inside,
            Ordering::Equal => {}
        }
    }
    Side::Outside
}

fn side_circumcircle(pts: &[Point], a: usize, b: usize, c: usize, p: usize) -> Side {
    let (pa, pb, pc, pp) = (pts[a], pts[b], pts[c], pts[p]);
    let o = orient(pa, pb, pc);
    if o == Ordering::Equal {
        // no finite circle passes through three collinear points
        return Side::Outside;
    }
    let flip = |s: Ordering| if o == Ordering::Less { s.reverse() } else { s };
    match flip(in_circle(pa, pb, pc, pp)) {
        Ordering::Greater => return Side::Inside,
        Ordering::Less => return Side::Outside,
        Ordering::Equal => {}
    }
    let mut order = [a, b, c, p];
    order.sort_unstable();
    for k in order {
        let coef = if k == a {
            orient(pb, pc, pp)
        } else if k == b {
            orient(pa, pc, pp).reverse()
        } else if k == c {
            orient(pa, pb, pp)
        } else {
            o.reverse()
        };
        match flip(coef) {
            Ordering::Greater => return Side::Inside,
            Ordering::Less => return Side::Outside,
            Ordering::Equal => {}
        }
    }
    Side::Outside
}

/// Perturbed in-circle test used by the triangulation: is `d` inside the
/// circumcircle of the counterclockwise triangle `a, b, c`?
pub fn in_circle_perturbed(pts: &[Point], a: usize, b: usize, c: usize, d: usize) -> bool {
    side_circumcircle(pts, a, b, c, d) == Side::Inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y).unwrap()
    }

    #[test]
    fn dot_sign_exact_on_cancellation() {
        let a = p(1e16, 1.0);
        let b = p(1e16, 0.0);
        assert_eq!(dot_sign(a, b, a, b), Ordering::Greater);
        let z = p(0.1, 0.2);
        assert_eq!(dot_sign(z, z, a, b), Ordering::Equal);
    }

    #[test]
    fn cocircular_square_is_resolved_consistently() {
        let pts = vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        // 3 inside circle(0,1,2) by the perturbation, so diagonal 1-3 is Delaunay
        assert!(in_circle_perturbed(&pts, 0, 1, 2, 3));
        assert_eq!(side_perturbed(&pts, &[0, 2], 1), Side::Inside);
        assert_eq!(side_perturbed(&pts, &[1, 3], 0), Side::Outside);
        assert_eq!(side_perturbed(&pts, &[1, 2, 3], 0), Side::Outside);
    }

    #[test]
    fn support_points_are_on() {
        let pts = vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.0)];
        for r in [&[0usize][..], &[0, 1], &[0, 1, 2]] {
            for &i in r {
                assert_eq!(side_perturbed(&pts, r, i), Side::On);
            }
        }
    }
}
