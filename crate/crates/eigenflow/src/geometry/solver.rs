use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::predicates::side_perturbed;
use super::{Point, Side, Sphere, Support};
use crate::error::GeometryError;

/// Which side of the sphere a point is required to be on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// inside or on
    Q,
    /// outside or on
    A,
    /// on
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideQuery {
    pub index: usize,
    pub role: Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
pub enum SolverKind {
    Recursive,
    #[default]
    #[value(name = "mtf")]
    MoveToFront,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub calls: u64,
    pub side_tests: u64,
}

/// Smallest circle through the points `r` (at most three).
pub fn circumsphere(pts: &[Point], r: &[usize]) -> Result<Sphere, GeometryError> {
    let support = Support::from_slice(r);
    let s = support.as_slice();
    match s.len() {
        0 => Ok(Sphere::empty()),
        1 => Ok(Sphere { center: pts[s[0]], radius: 0.0, support, center_err: 0.0 }),
        2 => {
            let (a, b) = (pts[s[0]], pts[s[1]]);
            let center = Point { x: 0.5 * (a.x + b.x), y: 0.5 * (a.y + b.y) };
            let center_err = U * (a.x + b.x).abs().max((a.y + b.y).abs());
            Ok(Sphere { center, radius: 0.5 * a.dist(b), support, center_err })
        }
        3 => {
            let (a, b, c) = (pts[s[0]], pts[s[1]], pts[s[2]]);
            if super::orient(a, b, c) == std::cmp::Ordering::Equal {
                return Err(GeometryError::AffineDegeneracy);
            }
            let (bx, by) = (b.x - a.x, b.y - a.y);
            let (cx, cy) = (c.x - a.x, c.y - a.y);
            let d = 2.0 * (bx * cy - by * cx);
            let b2 = bx * bx + by * by;
            let c2 = cx * cx + cy * cy;
            let ux = (cy * b2 - by * c2) / d;
            let uy = (bx * c2 - cx * b2) / d;
            let radius = (ux * ux + uy * uy).sqrt();
            if !radius.is_finite() {
                return Err(GeometryError::AffineDegeneracy);
            }
            let den = 2.0 * ((bx * cy).abs() + (by * cx).abs());
            let ex = ((cy.abs() * b2 + by.abs() * c2) + ux.abs() * den) / d.abs();
            let ey = ((bx.abs() * c2 + cx.abs() * b2) + uy.abs() * den) / d.abs();
            let center_err =
                32.0 * U * ex.max(ey) + 2.0 * U * (a.x.abs() + a.y.abs() + ux.abs() + uy.abs());
            Ok(Sphere { center: Point { x: a.x + ux, y: a.y + uy }, radius, support, center_err })
        }
        _ => Err(GeometryError::AffineDegeneracy),
    }
}

const U: f64 = f64::EPSILON * 0.5;

/// Exact, perturbed classification of point `p` (an index into `pts`).
/// A floating-point filter on the computed center settles clear cases.
pub fn side_of(pts: &[Point], sphere: &Sphere, p: usize) -> Side {
    let sup = sphere.support.as_slice();
    if sup.len() >= 2 && !sup.contains(&p) {
        let (a, q, c) = (pts[sup[0]], pts[p], sphere.center);
        let dq = q.dist2(c);
        let da = a.dist2(c);
        let f = dq - da;
        let bound = 4.0 * sphere.center_err * ((q.x - a.x).abs() + (q.y - a.y).abs())
            + 8.0 * U * (dq + da);
        if f > bound {
            return Side::Outside;
        }
        if f < -bound {
            return Side::Inside;
        }
    }
    side_perturbed(pts, sup, p)
}

#[inline]
fn contradicts(pts: &[Point], s: &Sphere, p: usize, role: Role, stats: &mut SolverStats) -> bool {
    stats.side_tests += 1;
    let side = side_of(pts, s, p);
    match role {
        Role::Q => side == Side::Outside,
        Role::A => side == Side::Inside,
        Role::Both => side != Side::On,
    }
}

/// Shared body of the recursive and move-to-front solvers. Considers the
/// first `n` entries of `list`; `role` yields `None` for entries to skip.
fn solve_core<F: Fn(usize) -> Option<Role>>(
    pts: &[Point],
    list: &mut [usize],
    n: usize,
    r: &mut Vec<usize>,
    role: &F,
    mtf: bool,
    stats: &mut SolverStats,
) -> Option<Sphere> {
    if r.len() > 3 {
        return None;
    }
    let mut s = circumsphere(pts, r).ok()?;
    for i in 0..n {
        let p = list[i];
        let Some(ro) = role(p) else { continue };
        if r.contains(&p) || !contradicts(pts, &s, p, ro, stats) {
            continue;
        }
        r.push(p);
        let sub = solve_core(pts, list, i, r, role, mtf, stats);
        r.pop();
        s = sub?;
        if mtf {
            list[..=i].rotate_right(1);
        }
    }
    Some(s)
}

/// Smallest sphere enclosing `p` with all of `r` on its boundary.
pub fn enclose<R: Rng>(
    pts: &[Point],
    p: &[usize],
    r: &[usize],
    rng: &mut R,
) -> Result<Sphere, GeometryError> {
    let mut list = p.to_vec();
    list.shuffle(rng);
    let mut rr = r.to_vec();
    let mut stats = SolverStats::default();
    let n = list.len();
    solve_core(pts, &mut list, n, &mut rr, &|_| Some(Role::Q), false, &mut stats)
        .ok_or(GeometryError::AffineDegeneracy)
}

/// Randomized smallest separating sphere. `p` holds the undecided queries,
/// `r` the queries known to lie on the sphere. `None` means no sphere exists.
pub fn separate<R: Rng>(
    pts: &[Point],
    p: &[SideQuery],
    r: &[SideQuery],
    rng: &mut R,
    stats: &mut SolverStats,
) -> Option<Sphere> {
    stats.calls += 1;
    let roles: std::collections::HashMap<usize, Role> =
        p.iter().chain(r).map(|q| (q.index, q.role)).collect();
    let mut list: Vec<usize> = p.iter().map(|q| q.index).collect();
    list.shuffle(rng);
    let mut rr: Vec<usize> = r.iter().map(|q| q.index).collect();
    let n = list.len();
    solve_core(pts, &mut list, n, &mut rr, &|i| roles.get(&i).copied(), false, stats)
}

/// Iterative solver that moves contradicting points to the front of `list`.
/// `list` must contain every query of Q and A; only the first `n` are scanned.
pub fn move_to_front_separate(
    pts: &[Point],
    list: &mut [SideQuery],
    n: usize,
    r: &[SideQuery],
    stats: &mut SolverStats,
) -> Option<Sphere> {
    stats.calls += 1;
    let roles: std::collections::HashMap<usize, Role> =
        list.iter().chain(r).map(|q| (q.index, q.role)).collect();
    let mut idx: Vec<usize> = list.iter().map(|q| q.index).collect();
    let mut rr: Vec<usize> = r.iter().map(|q| q.index).collect();
    let res = solve_core(pts, &mut idx, n, &mut rr, &|i| roles.get(&i).copied(), true, stats);
    for (slot, i) in list.iter_mut().zip(idx) {
        *slot = SideQuery { index: i, role: roles[&i] };
    }
    res
}

/// Convenience entry point: smallest sphere with `q` inside-or-on and `a`
/// outside-or-on, using `R = Q ∩ A` as the initial support.
pub fn separate_sets(
    pts: &[Point],
    q: &[usize],
    a: &[usize],
    kind: SolverKind,
    seed: u64,
) -> Option<Sphere> {
    let mut roles: std::collections::BTreeMap<usize, Role> = std::collections::BTreeMap::new();
    for &i in q {
        roles.insert(i, Role::Q);
    }
    for &i in a {
        roles
            .entry(i)
            .and_modify(|r| *r = Role::Both)
            .or_insert(Role::A);
    }
    let (r, p): (Vec<_>, Vec<_>) = roles
        .iter()
        .map(|(&index, &role)| SideQuery { index, role })
        .partition(|s| s.role == Role::Both);
    let mut stats = SolverStats::default();
    match kind {
        SolverKind::Recursive => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            separate(pts, &p, &r, &mut rng, &mut stats)
        }
        SolverKind::MoveToFront => {
            let mut list: Vec<SideQuery> = p.iter().chain(&r).copied().collect();
            let n = list.len();
            move_to_front_separate(pts, &mut list, n, &r, &mut stats)
        }
    }
}

/// Reusable solver over a fixed point set. The move-to-front variant keeps
/// its list between calls so that points which contradicted earlier spheres
/// are tested first.
#[derive(Clone, Debug)]
pub struct SeparationSolver {
    kind: SolverKind,
    list: Vec<usize>,
    rng: ChaCha8Rng,
    r: Vec<usize>,
    pub stats: SolverStats,
}

impl SeparationSolver {
    pub fn new(kind: SolverKind, n_points: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut list: Vec<usize> = (0..n_points).collect();
        list.shuffle(&mut rng);
        SeparationSolver { kind, list, rng, r: Vec::with_capacity(4), stats: SolverStats::default() }
    }

    pub fn kind(&self) -> SolverKind {
        self.kind
    }

    /// Solve with roles given by `role` (None = not part of the instance) and
    /// the points `on` forced onto the sphere.
    pub fn solve<F: Fn(usize) -> Option<Role>>(
        &mut self,
        pts: &[Point],
        on: &[usize],
        role: F,
    ) -> Option<Sphere> {
        self.stats.calls += 1;
        self.r.clear();
        self.r.extend_from_slice(on);
        match self.kind {
            SolverKind::MoveToFront => {
                let n = self.list.len();
                let mut r = std::mem::take(&mut self.r);
                let res = solve_core(pts, &mut self.list, n, &mut r, &role, true, &mut self.stats);
                self.r = r;
                res
            }
            SolverKind::Recursive => {
                let mut list: Vec<usize> =
                    (0..self.list.len()).filter(|&i| role(i).is_some()).collect();
                list.shuffle(&mut self.rng);
                let n = list.len();
                let mut r = std::mem::take(&mut self.r);
                let res = solve_core(pts, &mut list, n, &mut r, &role, false, &mut self.stats);
                self.r = r;
                res
            }
        }
    }
}
