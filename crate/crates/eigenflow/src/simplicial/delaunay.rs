//! Randomized incremental Delaunay triangulation (Bowyer-Watson with ghost
//! triangles), driven by the perturbed in-circle predicate so that
//! cocircular inputs resolve the same way as the sphere solvers.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::geometry::{dot_sign, in_circle_perturbed, orient, Point};

use super::Simplex;

const GHOST: u32 = u32::MAX;
const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Tri {
    v: [u32; 3],
    n: [u32; 3],
    alive: bool,
}

impl Tri {
    fn is_ghost(&self) -> bool {
        self.v.contains(&GHOST)
    }
}

struct Mesh<'a> {
    pts: &'a [Point],
    tris: Vec<Tri>,
    free: Vec<u32>,
    last: u32,
    mark: Vec<u32>,
    stamp: u32,
    rng: ChaCha8Rng,
}

impl<'a> Mesh<'a> {
    fn p(&self, i: u32) -> Point {
        self.pts[i as usize]
    }

    fn conflict(&self, t: u32, p: u32) -> bool {
        let tri = &self.tris[t as usize];
        let [a, b, c] = tri.v;
        if !tri.is_ghost() {
            return in_circle_perturbed(self.pts, a as usize, b as usize, c as usize, p as usize);
        }
        let (u, w) = if c == GHOST {
            (a, b)
        } else if a == GHOST {
            (b, c)
        } else {
            (c, a)
        };
        let (pu, pw, pp) = (self.p(u), self.p(w), self.p(p));
        match orient(pu, pw, pp) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => dot_sign(pp, pu, pp, pw) == Ordering::Less,
        }
    }

    fn alloc(&mut self, t: Tri) -> u32 {
        if let Some(id) = self.free.pop() {
            self.tris[id as usize] = t;
            self.mark[id as usize] = 0;
            id
        } else {
            self.tris.push(t);
            self.mark.push(0);
            (self.tris.len() - 1) as u32
        }
    }

    fn locate(&mut self, p: u32) -> u32 {
        let pp = self.p(p);
        let mut t = self.last;
        let limit = 4 * self.tris.len() + 16;
        'walk: for _ in 0..limit {
            let tri = self.tris[t as usize];
            if tri.is_ghost() {
                break;
            }
            let k0 = self.rng.random_range(0..3);
            for i in 0..3 {
                let k = (k0 + i) % 3;
                let a = tri.v[(k + 1) % 3];
                let b = tri.v[(k + 2) % 3];
                if orient(self.p(a), self.p(b), pp) == Ordering::Less {
                    t = tri.n[k];
                    continue 'walk;
                }
            }
            break;
        }
        if self.tris[t as usize].alive && self.conflict(t, p) {
            return t;
        }
        // walk failed to terminate in a conflicting triangle; scan
        (0..self.tris.len() as u32)
            .find(|&i| self.tris[i as usize].alive && self.conflict(i, p))
            .expect("every point conflicts with some triangle")
    }

    fn insert(&mut self, p: u32) {
        let t0 = self.locate(p);
        self.stamp += 1;
        let stamp = self.stamp;
        let mut cavity = vec![t0];
        self.mark[t0 as usize] = stamp;
        let mut head = 0;
        while head < cavity.len() {
            let t = cavity[head];
            head += 1;
            for k in 0..3 {
                let nb = self.tris[t as usize].n[k];
                if self.mark[nb as usize] != stamp && self.conflict(nb, p) {
                    self.mark[nb as usize] = stamp;
                    cavity.push(nb);
                }
            }
        }
        // boundary edges (a, b) in ccw order of the cavity triangle
        let mut boundary: Vec<(u32, u32, u32, u32)> = Vec::new();
        for &t in &cavity {
            let tri = self.tris[t as usize];
            for k in 0..3 {
                let nb = tri.n[k];
                if self.mark[nb as usize] != stamp {
                    boundary.push((tri.v[(k + 1) % 3], tri.v[(k + 2) % 3], nb, t));
                }
            }
        }
        for &t in &cavity {
            self.tris[t as usize].alive = false;
            self.free.push(t);
        }
        let mut created: Vec<(u32, u32, u32)> = Vec::with_capacity(boundary.len());
        for &(a, b, outer, old) in &boundary {
            let id = self.alloc(Tri { v: [a, b, p], n: [NIL, NIL, outer], alive: true });
            let o = &mut self.tris[outer as usize];
            for k in 0..3 {
                if o.n[k] == old && o.v[(k + 1) % 3] == b && o.v[(k + 2) % 3] == a {
                    o.n[k] = id;
                }
            }
            created.push((a, b, id));
        }
        for &(a, b, id) in &created {
            let start_b = created.iter().find(|e| e.0 == b).expect("closed cavity").2;
            let end_a = created.iter().find(|e| e.1 == a).expect("closed cavity").2;
            let tri = &mut self.tris[id as usize];
            tri.n[0] = start_b;
            tri.n[1] = end_a;
        }
        if let Some(&(_, _, id)) = created.iter().find(|e| e.0 != GHOST && e.1 != GHOST) {
            self.last = id;
        }
    }
}

fn link(tris: &mut [Tri]) {
    let mut edges: HashMap<(u32, u32), (usize, usize)> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            edges.insert((tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]), (t, k));
        }
    }
    for tri in tris.iter_mut() {
        for k in 0..3 {
            let (a, b) = (tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]);
            tri.n[k] = edges[&(b, a)].0 as u32;
        }
    }
}

/// Delaunay triangles of `pts` as sorted vertex triples. Fails with
/// `DegenerateInput` (carrying the vertices and path edges) when all points
/// are collinear.
pub fn triangulate(pts: &[Point], seed: u64) -> Result<Vec<[u32; 3]>, GeometryError> {
    let n = pts.len();
    if n < 3 {
        return Err(GeometryError::TooFewPoints { needed: 3, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut rng);
    let (a, b) = (order[0], order[1]);
    let Some(ci) = (2..n).find(|&i| {
        orient(pts[a as usize], pts[b as usize], pts[order[i] as usize]) != Ordering::Equal
    }) else {
        return Err(GeometryError::DegenerateInput { simplices: collinear_complex(pts) });
    };
    let c = order[ci];
    let (a, b) = if orient(pts[a as usize], pts[b as usize], pts[c as usize]) == Ordering::Less {
        (b, a)
    } else {
        (a, b)
    };
    let mut tris = vec![
        Tri { v: [a, b, c], n: [NIL; 3], alive: true },
        Tri { v: [b, a, GHOST], n: [NIL; 3], alive: true },
        Tri { v: [c, b, GHOST], n: [NIL; 3], alive: true },
        Tri { v: [a, c, GHOST], n: [NIL; 3], alive: true },
    ];
    link(&mut tris);
    let mut mesh = Mesh {
        pts,
        mark: vec![0; tris.len()],
        tris,
        free: Vec::new(),
        last: 0,
        stamp: 0,
        rng,
    };
    for (i, &p) in order.iter().enumerate() {
        if i < 2 || i == ci {
            continue;
        }
        mesh.insert(p);
    }
    let mut out: Vec<[u32; 3]> = mesh
        .tris
        .iter()
        .filter(|t| t.alive && !t.is_ghost())
        .map(|t| {
            let mut v = t.v;
            v.sort_unstable();
            v
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

fn collinear_complex(pts: &[Point]) -> Vec<Simplex> {
    let mut idx: Vec<u32> = (0..pts.len() as u32).collect();
    idx.sort_by(|&i, &j| {
        let (p, q) = (pts[i as usize], pts[j as usize]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    let mut out: Vec<Simplex> = idx.iter().map(|&i| Simplex::vertex(i)).collect();
    out.extend(idx.windows(2).map(|w| Simplex::edge(w[0], w[1])));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y).unwrap()).collect()
    }

    #[test]
    fn three_points() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (0.3, 1.0)]);
        assert_eq!(triangulate(&p, 0).unwrap(), vec![[0, 1, 2]]);
    }

    #[test]
    fn square_has_two_triangles_and_is_deterministic() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let t = triangulate(&p, 0).unwrap();
        assert_eq!(t.len(), 2);
        for seed in 1..20 {
            assert_eq!(triangulate(&p, seed).unwrap(), t);
        }
        assert_eq!(t, vec![[0, 1, 3], [1, 2, 3]]);
    }

    #[test]
    fn collinear_is_degenerate() {
        let p = pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0)]);
        match triangulate(&p, 0) {
            Err(GeometryError::DegenerateInput { simplices }) => {
                assert_eq!(simplices.len(), 5);
                assert!(simplices.contains(&Simplex::edge(0, 2)));
                assert!(simplices.contains(&Simplex::edge(1, 2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_is_independent_of_insertion_order() {
        let mut v = Vec::new();
        for i in 0..6 {
            for j in 0..5 {
                v.push((i as f64, j as f64));
            }
        }
        let p = pts(&v);
        let t = triangulate(&p, 3).unwrap();
        assert_eq!(t.len(), 2 * 5 * 4);
        for seed in 4..10 {
            assert_eq!(triangulate(&p, seed).unwrap(), t);
        }
    }
}
