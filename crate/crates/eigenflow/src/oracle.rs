//! Brute-force reference implementations and randomized comparisons against
//! the main algorithms. Everything here favours obviousness over speed.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eigen::eigenspace_dim;
use crate::field::{Mat, Zp};
use crate::geometry::{separate_sets, Point, SolverKind};
use crate::morse_flow::{bd, Chain, FlowConfig, FlowEngine, FlowVariant};
use crate::persistence::reduce;
use crate::simplicial::{build_filtration, Filtration, PointSet, Simplex};

const TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Spheres,
    Nerve,
    Flow,
    Persistence,
    Eigen,
    All,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// first few failure descriptions
    pub details: Vec<String>,
}

impl OracleReport {
    fn new(name: &str) -> Self {
        OracleReport { name: name.to_string(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.details.len() < 5 {
                self.details.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<Point> {
    (0..n).map(|_| Point { x: rng.random(), y: rng.random() }).collect()
}

/// Circle through the given points: a point, the diametral circle of two
/// points, or the circumcircle of three.
fn circle_through(pts: &[Point]) -> Option<(Point, f64)> {
    match pts {
        [a] => Some((*a, 0.0)),
        [a, b] => {
            let c = Point { x: 0.5 * (a.x + b.x), y: 0.5 * (a.y + b.y) };
            Some((c, 0.5 * a.dist(*b)))
        }
        [a, b, c] => {
            let (bx, by) = (b.x - a.x, b.y - a.y);
            let (cx, cy) = (c.x - a.x, c.y - a.y);
            let d = 2.0 * (bx * cy - by * cx);
            if d.abs() < 1e-14 {
                return None;
            }
            let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
            let ux = (cy * b2 - by * c2) / d;
            let uy = (bx * c2 - cx * b2) / d;
            Some((Point { x: a.x + ux, y: a.y + uy }, ux.hypot(uy)))
        }
        _ => None,
    }
}

/// Smallest circle with `q` inside-or-on and `a` outside-or-on, by trying
/// every support set of at most three points. Returns center and radius.
pub fn brute_separate(pts: &[Point], q: &[usize], a: &[usize]) -> Option<(Point, f64)> {
    let cand: Vec<usize> = q.iter().chain(a).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut best: Option<(Point, f64)> = None;
    let mut consider = |sup: &[usize]| {
        let p: Vec<Point> = sup.iter().map(|&i| pts[i]).collect();
        let Some((c, r)) = circle_through(&p) else { return };
        let slack = TOL * r.max(1.0);
        let ok = q.iter().all(|&i| pts[i].dist(c) <= r + slack)
            && a.iter().all(|&i| pts[i].dist(c) >= r - slack);
        if ok && best.is_none_or(|b| r < b.1) {
            best = Some((c, r));
        }
    };
    for (x, &i) in cand.iter().enumerate() {
        if q.contains(&i) {
            consider(&[i]);
        }
        for (y, &j) in cand.iter().enumerate().skip(x + 1) {
            consider(&[i, j]);
            for &k in &cand[y + 1..] {
                consider(&[i, j, k]);
            }
        }
    }
    best
}

/// Do the closed disks of radius `r` around the points share a point? A
/// nonempty intersection contains a disk center or a crossing of two circles.
pub fn brute_balls_intersect(pts: &[Point], r: f64) -> bool {
    let slack = TOL * r.max(1.0);
    let inside = |p: Point| pts.iter().all(|q| q.dist(p) <= r + slack);
    if pts.iter().any(|&p| inside(p)) {
        return true;
    }
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let d = a.dist(b);
            if d > 2.0 * r || d == 0.0 {
                continue;
            }
            let h = (r * r - 0.25 * d * d).max(0.0).sqrt();
            let m = Point { x: 0.5 * (a.x + b.x), y: 0.5 * (a.y + b.y) };
            let (ux, uy) = ((b.y - a.y) / d, (a.x - b.x) / d);
            for s in [-1.0, 1.0] {
                if inside(Point { x: m.x + s * h * ux, y: m.y + s * h * uy }) {
                    return true;
                }
            }
        }
    }
    false
}

/// Boundary matrix from `dim`-simplices to `dim - 1`-simplices restricted to
/// the first `end` filtration entries.
fn dense_boundary(filt: &Filtration, f: Zp, dim: usize, end: usize) -> Mat {
    let faces: Vec<usize> =
        (0..filt.len()).filter(|&i| filt.entries()[i].simplex.dim() + 1 == dim).collect();
    let cells: Vec<usize> =
        (0..end).filter(|&i| filt.entries()[i].simplex.dim() == dim).collect();
    let mut m = Mat::zeros(faces.len(), cells.len());
    for (c, &i) in cells.iter().enumerate() {
        for (j, s) in filt.boundary(i) {
            let r = faces.binary_search(&j).expect("face precedes coface");
            m.set(r, c, f.from_i64(s as i64));
        }
    }
    m
}

fn hstack(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.rows, b.rows);
    let rows: Vec<Vec<u32>> = (0..a.rows)
        .map(|i| (0..a.cols).map(|j| a.get(i, j)).chain((0..b.cols).map(|j| b.get(i, j))).collect())
        .collect();
    if rows.is_empty() {
        return Mat::zeros(0, a.cols + b.cols);
    }
    Mat::from_rows(&rows)
}

fn columns(vs: &[Vec<u32>], rows: usize) -> Mat {
    let mut m = Mat::zeros(rows, vs.len());
    for (c, v) in vs.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            m.set(r, c, x);
        }
    }
    m
}

/// Rank of `H_dim(K_i) -> H_dim(K_j)` from dense matrices:
/// `rank [B_j | Z_i] - rank B_j`.
pub fn dense_image_rank(filt: &Filtration, f: Zp, dim: usize, i: usize, j: usize) -> usize {
    let (end_i, end_j) = (filt.rank_end(i), filt.rank_end(j));
    // every dim-simplex of the filtration, in filtration order
    let cells: Vec<usize> =
        (0..filt.len()).filter(|&k| filt.entries()[k].simplex.dim() == dim).collect();
    let alive = cells.iter().take_while(|&&k| k < end_i).count();
    let cycles: Vec<Vec<u32>> = if dim == 0 {
        (0..alive)
            .map(|p| {
                let mut v = vec![0; cells.len()];
                v[p] = 1;
                v
            })
            .collect()
    } else {
        let mut z = dense_boundary(filt, f, dim, end_i).nullspace(f);
        for v in z.iter_mut() {
            v.resize(cells.len(), 0);
        }
        z
    };
    let b = dense_boundary(filt, f, dim + 1, end_j);
    let z = columns(&cycles, cells.len());
    hstack(&b, &z).rank(f) - b.rank(f)
}

/// Dimension of `ker(kappa - t iota) / (ker kappa ∩ ker iota)` by listing
/// every vector of the field. Only sensible for tiny fields and sizes.
pub fn enumerated_eigenspace_dim(f: Zp, kappa: &Mat, iota: &Mat, t: u32) -> usize {
    let n = kappa.cols;
    let p = f.p() as usize;
    let total = p.pow(n as u32);
    let (mut k, mut d) = (0usize, 0usize);
    let m = kappa.sub_scaled(f, t, iota);
    let mut v = vec![0u32; n];
    for code in 0..total {
        let mut c = code;
        for x in v.iter_mut() {
            *x = (c % p) as u32;
            c /= p;
        }
        let zero = |a: &Mat| a.mul_vec(f, &v).iter().all(|&x| x == 0);
        if zero(&m) {
            k += 1;
        }
        if zero(kappa) && zero(iota) {
            d += 1;
        }
    }
    let ratio = k / d;
    let mut dim = 0;
    let mut x = 1;
    while x < ratio {
        x *= p;
        dim += 1;
    }
    dim
}

pub fn spheres(trials: usize, seed: u64) -> OracleReport {
    let mut rep = OracleReport::new("spheres");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let n = rng.random_range(2..=10);
        let pts = random_points(&mut rng, n);
        let mut q = Vec::new();
        let mut a = Vec::new();
        let enclose_only = trial % 4 == 0;
        for i in 0..n {
            match rng.random_range(0..if enclose_only { 2 } else { 5 }) {
                0 => q.push(i),
                1 => {}
                2 | 3 => a.push(i),
                _ => {
                    q.push(i);
                    a.push(i);
                }
            }
        }
        if q.is_empty() {
            q.push(0);
            a.retain(|&i| i != 0);
        }
        let want = brute_separate(&pts, &q, &a);
        for kind in [SolverKind::Recursive, SolverKind::MoveToFront] {
            let got = separate_sets(&pts, &q, &a, kind, seed ^ trial as u64);
            let ok = match (&want, &got) {
                (None, None) => true,
                (Some((_, r)), Some(s)) => (s.radius - r).abs() <= 1e-9 * r.max(1e-300),
                _ => false,
            };
            rep.check(ok, || {
                format!(
                    "{kind:?} q={q:?} a={a:?}: brute {:?} vs {:?}",
                    want.map(|w| w.1),
                    got.map(|s| s.radius)
                )
            });
        }
    }
    rep
}

pub fn nerve(trials: usize, seed: u64) -> OracleReport {
    let mut rep = OracleReport::new("nerve");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rep.trials < trials {
        let n = rng.random_range(2..=8);
        let pts = random_points(&mut rng, n);
        let Ok(space) = PointSet::euclidean(pts.clone()) else { continue };
        let k = rng.random_range(2..=n.min(4));
        let mut idx: Vec<u32> = (0..n as u32).collect();
        idx.shuffle(&mut rng);
        let s = Simplex::new(&idx[..k]).expect("distinct vertices");
        let Ok(radius) = space.cech_radius(&s) else { continue };
        let mut u: f64 = rng.random_range(-0.2..0.2);
        if u.abs() < 1e-6 {
            u = 0.1;
        }
        let r = radius * (1.0 + u);
        let sub: Vec<Point> = s.vertices().iter().map(|&v| pts[v as usize]).collect();
        let want = brute_balls_intersect(&sub, r);
        let got = space.cech_contains(&s, r);
        rep.check(want == got, || format!("{s:?} at r={r}: brute {want}, got {got}"));
    }
    rep
}

pub fn persistence(trials: usize, seed: u64) -> OracleReport {
    let mut rep = OracleReport::new("persistence");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = Zp::default();
    let mut done = 0;
    while done < trials {
        let pts = random_points(&mut rng, 8);
        let Ok(space) = PointSet::euclidean(pts) else { continue };
        let Ok(filt) = build_filtration(&space) else { continue };
        done += 1;
        let pers = reduce(&filt, f);
        let n = filt.num_ranks();
        let mut ok = true;
        let mut first = String::new();
        'outer: for dim in 0..=1 {
            for i in 0..n {
                for j in i..n {
                    let want = dense_image_rank(&filt, f, dim, i, j);
                    let got = pers.diagram().image_rank(dim, i, j);
                    if want != got {
                        ok = false;
                        first = format!("dim {dim} ranks {i}..{j}: dense {want}, diagram {got}");
                        break 'outer;
                    }
                }
            }
        }
        rep.check(ok, || first);
    }
    rep
}

pub fn eigen(trials: usize, seed: u64) -> OracleReport {
    let mut rep = OracleReport::new("eigen");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = Zp::new(5).expect("prime");
    for _ in 0..trials {
        let rows = rng.random_range(1..=4);
        let cols = rng.random_range(1..=4);
        let mut gen = |zero: f64| {
            let mut m = Mat::zeros(rows, cols);
            for x in m.data.iter_mut() {
                if !rng.random_bool(zero) {
                    *x = rng.random_range(0..5);
                }
            }
            m
        };
        let kappa = gen(0.4);
        let iota = gen(0.6);
        let mut ok = true;
        for t in 0..5 {
            ok &= eigenspace_dim(f, &kappa, &iota, t) == enumerated_eigenspace_dim(f, &kappa, &iota, t);
        }
        rep.check(ok, || format!("kappa {:?} iota {:?}", kappa.data, iota.data));
    }
    rep
}

fn random_chain<R: Rng>(rng: &mut R, f: Zp, n: usize, dim: usize, max_terms: usize) -> Chain {
    let terms = rng.random_range(1..=max_terms);
    let mut idx: Vec<u32> = (0..n as u32).collect();
    Chain::from_terms(
        f,
        (0..terms).map(|_| {
            idx.shuffle(rng);
            (Simplex::new(&idx[..dim + 1]).expect("distinct"), rng.random_range(-3..=3i64))
        }),
    )
}

fn support_radius(space: &PointSet, c: &Chain) -> f64 {
    c.support().map(|s| space.cech_radius(s).expect("euclidean")).fold(0.0, f64::max)
}

/// Is `c` a boundary of triangles of Čech radius at most `s`?
fn is_cech_boundary(space: &PointSet, f: Zp, c: &Chain, s: f64) -> bool {
    if c.is_zero() {
        return true;
    }
    let n = space.len() as u32;
    let mut edges: Vec<Simplex> = Vec::new();
    let mut tris = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push(Simplex::edge(a, b));
            for d in b + 1..n {
                let t = Simplex::triangle(a, b, d);
                if space.cech_radius(&t).is_ok_and(|r| r <= s) {
                    tris.push(t);
                }
            }
        }
    }
    let mut cols: Vec<Vec<u32>> = tris
        .iter()
        .map(|t| {
            let b = bd(&Chain::simplex(f, *t, 1));
            edges.iter().map(|e| b.coef(e)).collect()
        })
        .collect();
    let bm = columns(&cols, edges.len());
    cols.push(edges.iter().map(|e| c.coef(e)).collect());
    let with = columns(&cols, edges.len());
    with.rank(f) == bm.rank(f)
}

/// Algebraic identities of the flow together with its homology and
/// support guarantees.
pub fn flow(trials: usize, seed: u64) -> Vec<OracleReport> {
    let mut square = OracleReport::new("boundary squares to zero");
    let mut commute = OracleReport::new("flow commutes with boundary");
    let mut support = OracleReport::new("flow lands in the filtration without growing");
    let mut homology = OracleReport::new("flow preserves homology");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = Zp::default();
    let mut done = 0;
    while done < trials {
        let n = rng.random_range(5..=10);
        let Ok(space) = PointSet::euclidean(random_points(&mut rng, n)) else { continue };
        let Ok(filt) = build_filtration(&space) else { continue };
        done += 1;
        let variant = if done % 2 == 0 { FlowVariant::Full } else { FlowVariant::Reduced };
        let cfg = FlowConfig { variant, seed: done as u64, ..FlowConfig::default() };
        let mut eng = FlowEngine::new(&space, &filt, f, cfg);

        let dim = rng.random_range(1..=3usize).min(n - 1);
        let c = random_chain(&mut rng, f, n, dim, 4);
        square.check(bd(&bd(&c)).is_zero(), || format!("{c:?}"));

        let c = random_chain(&mut rng, f, n, 1, 5);
        let lhs = eng.phi(&c).map(|x| bd(&x));
        let rhs = eng.phi(&bd(&c));
        commute.check(lhs.is_ok() && lhs.as_ref().ok() == rhs.as_ref().ok(), || format!("{c:?}"));

        let c = bd(&random_chain(&mut rng, f, n, 2, 3));
        let s = support_radius(&space, &c);
        match eng.phi_star(&c) {
            Ok((out, _)) => {
                let inside = out.support().all(|x| filt.contains(x));
                let grows = support_radius(&space, &out) > s;
                support.check(inside && !grows, || format!("{c:?} -> {out:?}"));
                let diff = out.sub(&c);
                homology.check(is_cech_boundary(&space, f, &diff, s), || format!("{c:?} -> {out:?}"));
            }
            Err(e) => {
                support.check(false, || format!("{c:?}: {e}"));
                homology.check(false, || format!("{c:?}: {e}"));
            }
        }
    }
    vec![square, commute, support, homology]
}

pub fn run(scope: Scope, trials: usize, seed: u64) -> Vec<OracleReport> {
    let mut out = Vec::new();
    let all = scope == Scope::All;
    if all || scope == Scope::Spheres {
        out.push(spheres(trials, seed));
    }
    if all || scope == Scope::Nerve {
        out.push(nerve(trials, seed));
    }
    if all || scope == Scope::Persistence {
        out.push(persistence(trials.min(100), seed));
    }
    if all || scope == Scope::Eigen {
        out.push(eigen(trials, seed));
    }
    if all || scope == Scope::Flow {
        out.extend(flow(trials, seed));
    }
    out
}
