//! Points, spheres and the smallest enclosing / separating sphere solvers.

mod predicates;
mod solver;

pub use predicates::{dot_sign, in_circle, in_circle_perturbed, orient, side_perturbed, Side};
pub use solver::{
    circumsphere, enclose, move_to_front_separate, separate, separate_sets, side_of, Role,
    SeparationSolver, SideQuery, SolverKind, SolverStats,
};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Relative width of the tolerance band used by [`Sphere::side_of_point`].
pub const SIDE_TOLERANCE: f64 = 1e-9;

/// A point in the plane with finite coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    #[inline]
    pub fn dist2(self, o: Point) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        self.dist2(o).sqrt()
    }
}

/// Up to three point indices determining a sphere, kept sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Support {
    idx: [usize; 3],
    len: u8,
}

impl Support {
    pub fn from_slice(s: &[usize]) -> Self {
        assert!(s.len() <= 3);
        let mut idx = [0usize; 3];
        idx[..s.len()].copy_from_slice(s);
        idx[..s.len()].sort_unstable();
        Support { idx, len: s.len() as u8 }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.idx[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// A circle given by center and radius, together with the indices of the
/// points that determine it. The empty support carries radius `-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sphere {
    pub center: Point,
    pub radius: f64,
    pub support: Support,
    /// bound on the rounding error of each center coordinate
    pub(crate) center_err: f64,
}

impl Sphere {
    pub fn empty() -> Self {
        Sphere {
            center: Point { x: 0.0, y: 0.0 },
            radius: -1.0,
            support: Support::default(),
            center_err: 0.0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.radius < 0.0
    }

    /// Floating-point classification with a relative tolerance band.
    pub fn side_of_point(&self, p: Point) -> Side {
        if self.is_empty() {
            return Side::Outside;
        }
        let d = p.dist(self.center);
        let band = SIDE_TOLERANCE * self.radius.max(1.0);
        if (d - self.radius).abs() <= band {
            Side::On
        } else if d < self.radius {
            Side::Inside
        } else {
            Side::Outside
        }
    }

    /// True if both spheres agree in center and radius up to `rel`.
    pub fn approx_eq(&self, o: &Sphere, rel: f64) -> bool {
        if self.is_empty() || o.is_empty() {
            return self.is_empty() == o.is_empty();
        }
        let scale = self.radius.abs().max(o.radius.abs()).max(1e-300);
        (self.radius - o.radius).abs() <= rel * scale
            && self.center.dist(o.center) <= rel * scale.max(1.0)
    }
}
