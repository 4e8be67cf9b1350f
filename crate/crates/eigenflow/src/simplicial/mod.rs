//! Simplices, point sets in the plane or on the flat torus, the Delaunay
//! triangulation and the Delaunay-Čech filtration.

mod delaunay;
mod filtration;

pub use delaunay::triangulate;
pub use filtration::{build_filtration, Filtration, FiltrationEntry};

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::geometry::{self, Point, SolverKind, Sphere};

/// A simplex with at most four vertices, stored as sorted point indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex {
    v: [u32; 4],
    len: u8,
}

impl Simplex {
    /// Builds a simplex from arbitrary vertices; `None` on duplicates or
    /// more than four vertices.
    pub fn new(vs: &[u32]) -> Option<Self> {
        if vs.is_empty() || vs.len() > 4 {
            return None;
        }
        let mut v = [u32::MAX; 4];
        v[..vs.len()].copy_from_slice(vs);
        v[..vs.len()].sort_unstable();
        if v[..vs.len()].windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Simplex { v, len: vs.len() as u8 })
    }

    pub fn vertex(a: u32) -> Self {
        Simplex { v: [a, u32::MAX, u32::MAX, u32::MAX], len: 1 }
    }

    pub fn edge(a: u32, b: u32) -> Self {
        Self::new(&[a, b]).expect("distinct edge vertices")
    }

    pub fn triangle(a: u32, b: u32, c: u32) -> Self {
        Self::new(&[a, b, c]).expect("distinct triangle vertices")
    }

    #[inline]
    pub fn vertices(&self) -> &[u32] {
        &self.v[..self.len as usize]
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.vertices().contains(&x)
    }

    /// Face obtained by dropping the `k`-th vertex; its incidence number in
    /// the boundary is `(-1)^k`.
    pub fn facet(&self, k: usize) -> Simplex {
        let mut v = [u32::MAX; 4];
        let mut j = 0;
        for (i, &x) in self.vertices().iter().enumerate() {
            if i != k {
                v[j] = x;
                j += 1;
            }
        }
        Simplex { v, len: self.len - 1 }
    }

    /// Coface with `x` added, together with the position of `x` in it.
    pub fn with_vertex(&self, x: u32) -> Option<(Simplex, usize)> {
        if self.contains(x) || self.len == 4 {
            return None;
        }
        let pos = self.vertices().iter().filter(|&&y| y < x).count();
        let mut v = [u32::MAX; 4];
        v[..pos].copy_from_slice(&self.v[..pos]);
        v[pos] = x;
        v[pos + 1..self.len as usize + 1].copy_from_slice(&self.v[pos..self.len as usize]);
        Some((Simplex { v, len: self.len + 1 }, pos))
    }

    /// Position of `x` among the vertices, if present.
    pub fn position(&self, x: u32) -> Option<usize> {
        self.vertices().iter().position(|&y| y == x)
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| self.vertices().cmp(other.vertices()))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vertices())
    }
}

impl Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Simplex::new(&v).ok_or_else(|| serde::de::Error::custom("invalid simplex"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    FlatTorus { period: f64 },
}

const COPIES: usize = 9;
const CENTER_COPY: usize = 4;

/// A finite point set together with the geometry used for sphere queries.
///
/// On the flat torus the solvers run on a 3x3 replication of the fundamental
/// domain; cover index `copy * n + i` is point `i` translated by the copy's
/// offset, with the identity translation at copy 4.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<Point>,
    metric: Metric,
    cover: Vec<Point>,
}

fn check_duplicates(points: &[Point]) -> Result<(), GeometryError> {
    let mut seen = std::collections::HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let key = (p.x.to_bits(), p.y.to_bits());
        if let Some(j) = seen.insert(key, i) {
            return Err(GeometryError::DuplicatePoints(j, i));
        }
    }
    Ok(())
}

fn snap_unit(period: f64) -> Result<f64, GeometryError> {
    if !(period.is_finite() && period > 0.0) {
        return Err(GeometryError::NonFinite);
    }
    let e = period.log2().ceil() as i32;
    let unit = 2f64.powi(e - 32);
    if (period / unit).fract() != 0.0 {
        return Err(GeometryError::PeriodicTriangulation(format!(
            "period {period} is not a multiple of the snapping grid"
        )));
    }
    Ok(unit)
}

impl PointSet {
    pub fn euclidean(points: Vec<Point>) -> Result<Self, GeometryError> {
        for p in &points {
            Point::new(p.x, p.y)?;
        }
        check_duplicates(&points)?;
        Ok(PointSet { cover: points.clone(), points, metric: Metric::Euclidean })
    }

    /// Points on the flat torus `[0, period)^2`. Coordinates are wrapped and
    /// snapped to a dyadic grid so that translated copies are exact.
    pub fn flat_torus(points: Vec<Point>, period: f64) -> Result<Self, GeometryError> {
        let unit = snap_unit(period)?;
        let mut snapped = Vec::with_capacity(points.len());
        for p in &points {
            Point::new(p.x, p.y)?;
            let wrap = |x: f64| {
                let w = ((x.rem_euclid(period)) / unit).round() * unit;
                if w >= period {
                    w - period
                } else {
                    w
                }
            };
            snapped.push(Point { x: wrap(p.x), y: wrap(p.y) });
        }
        check_duplicates(&snapped)?;
        let n = snapped.len();
        let mut cover = Vec::with_capacity(COPIES * n);
        for copy in 0..COPIES {
            let ox = (copy / 3) as f64 - 1.0;
            let oy = (copy % 3) as f64 - 1.0;
            for p in &snapped {
                cover.push(Point { x: p.x + ox * period, y: p.y + oy * period });
            }
        }
        Ok(PointSet { points: snapped, metric: Metric::FlatTorus { period }, cover })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Points the sphere solvers operate on (the cover on the torus).
    pub fn solver_points(&self) -> &[Point] {
        &self.cover
    }

    #[inline]
    pub fn original(&self, c: usize) -> usize {
        c % self.points.len()
    }

    /// Sort key of a solver point: original index first, copy second.
    #[inline]
    pub fn order_key(&self, c: usize) -> usize {
        let n = self.points.len();
        (c % n) * COPIES + c / n
    }

    /// Distance in the set's metric.
    pub fn dist(&self, a: Point, b: Point) -> f64 {
        match self.metric {
            Metric::Euclidean => a.dist(b),
            Metric::FlatTorus { period } => torus_dist(a, b, period),
        }
    }

    /// Solver-point indices of a simplex. On the torus the lowest vertex is
    /// taken from the central copy and every other vertex from the copy
    /// nearest to it.
    pub fn lift(&self, s: &Simplex) -> Vec<usize> {
        match self.metric {
            Metric::Euclidean => s.vertices().iter().map(|&v| v as usize).collect(),
            Metric::FlatTorus { .. } => {
                let n = self.points.len();
                let vs = s.vertices();
                let base = CENTER_COPY * n + vs[0] as usize;
                let p0 = self.cover[base];
                let mut out = Vec::with_capacity(vs.len());
                out.push(base);
                for &v in &vs[1..] {
                    let best = (0..COPIES)
                        .map(|c| c * n + v as usize)
                        .min_by(|&a, &b| {
                            self.cover[a].dist2(p0).total_cmp(&self.cover[b].dist2(p0))
                        })
                        .expect("nonempty");
                    out.push(best);
                }
                out
            }
        }
    }

    /// Solver-point indices of all copies of the given original points.
    pub fn copies_of(&self, idx: &[usize]) -> Vec<usize> {
        match self.metric {
            Metric::Euclidean => idx.to_vec(),
            Metric::FlatTorus { .. } => {
                let n = self.points.len();
                (0..COPIES).flat_map(|c| idx.iter().map(move |&i| c * n + i)).collect()
            }
        }
    }

    /// Smallest enclosing sphere of the (lifted) simplex.
    pub fn miniball(&self, s: &Simplex) -> Sphere {
        let lift = self.lift(s);
        miniball(&self.cover, &lift)
    }

    /// Smallest enclosing sphere of a simplex, in solver coordinates. On the
    /// torus the radius must stay below half the period for the lift to be
    /// meaningful.
    pub fn checked_miniball(&self, s: &Simplex) -> Result<Sphere, GeometryError> {
        let lift = self.lift(s);
        let ball = miniball(&self.cover, &lift);
        if let Metric::FlatTorus { period } = self.metric {
            let r = ball.radius;
            if r >= 0.5 * period {
                return Err(GeometryError::PeriodicRadius { simplex: *s, radius: r, period });
            }
            for i in 0..lift.len() {
                for j in i + 1..lift.len() {
                    let (a, b) = (self.cover[lift[i]], self.cover[lift[j]]);
                    if a.dist(b) > torus_dist(a, b, period) * (1.0 + 1e-12) {
                        return Err(GeometryError::PeriodicRadius { simplex: *s, radius: r, period });
                    }
                }
            }
        }
        Ok(ball)
    }

    /// Čech radius of an arbitrary vertex set.
    pub fn cech_radius(&self, s: &Simplex) -> Result<f64, GeometryError> {
        Ok(self.checked_miniball(s)?.radius)
    }

    /// Is the simplex in the Čech complex of radius `r`?
    pub fn cech_contains(&self, s: &Simplex, r: f64) -> bool {
        self.cech_radius(s).map(|x| x <= r).unwrap_or(false)
    }

    /// Does a sphere exist with `q` inside-or-on and every point of `a`
    /// outside-or-on?
    pub fn selective_membership(&self, q: &Simplex, a: &[usize]) -> bool {
        if a.is_empty() {
            return true;
        }
        let lift = self.lift(q);
        let aset = self.copies_of(a);
        geometry::separate_sets(&self.cover, &lift, &aset, SolverKind::MoveToFront, 0).is_some()
    }
}

/// Smallest enclosing sphere of a handful of points (deterministic order).
pub fn miniball(pts: &[Point], idx: &[usize]) -> Sphere {
    let mut rng = rand_chacha::ChaCha8Rng::from_seed([7; 32]);
    geometry::enclose(pts, idx, &[], &mut rng).expect("enclosing sphere exists")
}

pub fn torus_dist(a: Point, b: Point, period: f64) -> f64 {
    let wrap = |d: f64| {
        let d = d.abs().rem_euclid(period);
        d.min(period - d)
    };
    let dx = wrap(a.x - b.x);
    let dy = wrap(a.y - b.y);
    (dx * dx + dy * dy).sqrt()
}

/// All simplices of the Delaunay triangulation of the point set.
pub fn delaunay_triangulation(space: &PointSet) -> Result<Vec<Simplex>, GeometryError> {
    let n = space.len();
    match space.metric {
        Metric::Euclidean => {
            let tris = triangulate(&space.points, 0x5eed)?;
            Ok(complex_from_triangles(n, tris.iter().map(|t| Simplex::triangle(t[0], t[1], t[2]))))
        }
        Metric::FlatTorus { .. } => {
            let tris = triangulate(&space.cover, 0x5eed)?;
            let mut canon: Vec<Simplex> = Vec::new();
            for t in &tris {
                let cs: Vec<usize> = t.iter().map(|&c| c as usize).collect();
                if !cs.iter().any(|&c| c / n == CENTER_COPY) {
                    continue;
                }
                let o: Vec<u32> = cs.iter().map(|&c| (c % n) as u32).collect();
                let s = Simplex::new(&o).ok_or_else(|| {
                    GeometryError::PeriodicTriangulation(
                        "a triangle wraps onto itself; too few points for the period".into(),
                    )
                })?;
                canon.push(s);
            }
            canon.sort();
            canon.dedup();
            let all = complex_from_triangles(n, canon.into_iter());
            let (v, e, t) = all.iter().fold((0i64, 0i64, 0i64), |acc, s| match s.dim() {
                0 => (acc.0 + 1, acc.1, acc.2),
                1 => (acc.0, acc.1 + 1, acc.2),
                _ => (acc.0, acc.1, acc.2 + 1),
            });
            if v - e + t != 0 || 2 * e != 3 * t {
                return Err(GeometryError::PeriodicTriangulation(format!(
                    "V - E + T = {} (V={v}, E={e}, T={t}); the sample is likely too sparse for the period",
                    v - e + t
                )));
            }
            Ok(all)
        }
    }
}

fn complex_from_triangles(n: usize, tris: impl Iterator<Item = Simplex>) -> Vec<Simplex> {
    let mut out: Vec<Simplex> = (0..n as u32).map(Simplex::vertex).collect();
    let mut edges: HashSet<Simplex> = HashSet::new();
    let mut triangles = Vec::new();
    for t in tris {
        for k in 0..3 {
            edges.insert(t.facet(k));
        }
        triangles.push(t);
    }
    let mut edges: Vec<Simplex> = edges.into_iter().collect();
    edges.sort();
    out.extend(edges);
    out.extend(triangles);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[(f64, f64)]) -> PointSet {
        PointSet::euclidean(v.iter().map(|&(x, y)| Point::new(x, y).unwrap()).collect()).unwrap()
    }

    #[test]
    fn simplex_faces_and_cofaces() {
        let t = Simplex::triangle(4, 1, 7);
        assert_eq!(t.vertices(), &[1, 4, 7]);
        assert_eq!(t.facet(0), Simplex::edge(4, 7));
        assert_eq!(t.facet(2), Simplex::edge(1, 4));
        let (c, pos) = Simplex::edge(1, 7).with_vertex(4).unwrap();
        assert_eq!((c, pos), (t, 1));
        assert!(Simplex::new(&[1, 1]).is_none());
    }

    #[test]
    fn cech_radius_examples() {
        let s = ps(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]);
        assert_eq!(s.cech_radius(&Simplex::vertex(0)).unwrap(), 0.0);
        assert_eq!(s.cech_radius(&Simplex::edge(0, 1)).unwrap(), 1.0);
        let r = s.cech_radius(&Simplex::triangle(0, 1, 2)).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.cech_contains(&Simplex::vertex(2), 0.0));
        assert!(!s.cech_contains(&Simplex::edge(0, 1), 0.99));
    }

    #[test]
    fn selective_membership_extremes() {
        let s = ps(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.45), (3.0, 0.2)]);
        let all: Vec<usize> = (0..6).collect();
        let del = delaunay_triangulation(&s).unwrap();
        for q in &del {
            assert!(s.selective_membership(q, &[]));
            assert!(s.selective_membership(q, &all), "{q:?}");
        }
        // the diagonal 0-2 passes by point 4 and cannot be Delaunay
        assert!(!del.contains(&Simplex::edge(0, 2)));
        assert!(!s.selective_membership(&Simplex::edge(0, 2), &all));
    }

    #[test]
    fn torus_distance_wraps() {
        let a = Point::new(0.05, 0.5).unwrap();
        let b = Point::new(0.95, 0.5).unwrap();
        assert!((torus_dist(a, b, 1.0) - 0.1).abs() < 1e-12);
    }
}
