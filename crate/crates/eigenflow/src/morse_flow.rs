//! Chains over Z_p, the implicit discrete gradient on Čech simplices that are
//! not Delaunay, and the discrete flow pushing cycles into the Delaunay-Čech
//! complex.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::FlowError;
use crate::field::Zp;
use crate::geometry::{side_of, Role, SeparationSolver, Side, SolverKind, SolverStats};
use crate::simplicial::{Filtration, PointSet, Simplex};

/// Finite formal sum of simplices of one dimension with coefficients in Z_p.
/// Terms are kept sorted by simplex with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    field: Zp,
    terms: Vec<(Simplex, u32)>,
}

impl Chain {
    pub fn zero(field: Zp) -> Self {
        Chain { field, terms: Vec::new() }
    }

    /// Sums the given terms; coefficients are taken modulo p.
    pub fn from_terms(field: Zp, terms: impl IntoIterator<Item = (Simplex, i64)>) -> Self {
        let mut acc: HashMap<Simplex, u32> = HashMap::new();
        for (s, c) in terms {
            let c = field.from_i64(c);
            let e = acc.entry(s).or_insert(0);
            *e = field.add(*e, c);
        }
        Self::from_map(field, acc)
    }

    fn from_map(field: Zp, acc: HashMap<Simplex, u32>) -> Self {
        let mut terms: Vec<(Simplex, u32)> = acc.into_iter().filter(|t| t.1 != 0).collect();
        terms.sort_unstable_by_key(|t| t.0);
        if let Some(d) = terms.first().map(|t| t.0.dim()) {
            assert!(terms.iter().all(|t| t.0.dim() == d), "mixed dimensions in chain");
        }
        Chain { field, terms }
    }

    pub fn simplex(field: Zp, s: Simplex, c: i64) -> Self {
        Self::from_terms(field, [(s, c)])
    }

    pub fn field(&self) -> Zp {
        self.field
    }

    pub fn terms(&self) -> &[(Simplex, u32)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn dim(&self) -> Option<usize> {
        self.terms.first().map(|t| t.0.dim())
    }

    pub fn coef(&self, s: &Simplex) -> u32 {
        self.terms.binary_search_by(|t| t.0.cmp(s)).map_or(0, |i| self.terms[i].1)
    }

    pub fn support(&self) -> impl Iterator<Item = &Simplex> {
        self.terms.iter().map(|t| &t.0)
    }

    pub fn scale(&self, c: u32) -> Chain {
        let f = self.field;
        let c = c % f.p();
        if c == 0 {
            return Chain::zero(f);
        }
        Chain { field: f, terms: self.terms.iter().map(|&(s, a)| (s, f.mul(a, c))).collect() }
    }

    pub fn add(&self, o: &Chain) -> Chain {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Chain) -> Chain {
        self.combine(o, true)
    }

    fn combine(&self, o: &Chain, negate: bool) -> Chain {
        let f = self.field;
        assert_eq!(f, o.field, "chains over different fields");
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: u32| if negate { f.neg(c) } else { c };
        while i < self.terms.len() || j < o.terms.len() {
            let ord = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((o.terms[j].0, rhs(o.terms[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = f.add(self.terms[i].1, rhs(o.terms[j].1));
                    if c != 0 {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        if let (Some(a), Some(b)) = (self.dim(), o.dim()) {
            assert_eq!(a, b, "mixed dimensions in chain");
        }
        Chain { field: f, terms: out }
    }
}

/// Boundary of a chain. Vertices have zero boundary.
pub fn bd(c: &Chain) -> Chain {
    let f = c.field;
    let mut acc: HashMap<Simplex, u32> = HashMap::with_capacity(3 * c.len());
    for &(s, a) in &c.terms {
        if s.dim() == 0 {
            continue;
        }
        for k in 0..=s.dim() {
            let coef = if k % 2 == 0 { a } else { f.neg(a) };
            let e = acc.entry(s.facet(k)).or_insert(0);
            *e = f.add(*e, coef);
        }
    }
    Chain::from_map(f, acc)
}

/// Value of the discrete gradient at a simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gradient {
    /// The simplex is the lower member of a pair; the gradient maps it to
    /// `sign * coface`.
    Paired { coface: Simplex, sign: i8 },
    /// The simplex is the upper member of a pair with `face`; gradient zero.
    Upper { face: Simplex },
    /// Delaunay simplex; gradient zero.
    Critical,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FlowVariant {
    /// c + bd(grad c) + grad(bd c)
    #[default]
    Full,
    /// c + bd(grad c)
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub variant: FlowVariant,
    pub solver: SolverKind,
    /// Iteration cap for `phi_star`; `None` means ten times the number of
    /// points.
    pub max_iterations: Option<usize>,
    /// Seed for a random vertex ordering; `None` keeps the index order.
    pub order_seed: Option<u64>,
    pub seed: u64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            variant: FlowVariant::Full,
            solver: SolverKind::MoveToFront,
            max_iterations: None,
            order_seed: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct FlowStats {
    pub psi_evaluations: u64,
    pub cache_hits: u64,
    pub phi_applications: u64,
    pub solver: SolverStats,
    #[serde(skip)]
    pub sphere_time: Duration,
}

/// Gradient and flow on a fixed point set and filtration. Results of the
/// gradient are cached per simplex for the lifetime of the engine.
pub struct FlowEngine<'a> {
    space: &'a PointSet,
    filtration: &'a Filtration,
    field: Zp,
    config: FlowConfig,
    solver: SeparationSolver,
    cache: HashMap<Simplex, Gradient>,
    /// rank of each original point in the vertex ordering
    order: Vec<usize>,
    stamp: Vec<u32>,
    pos: Vec<u32>,
    generation: u32,
    pub stats: FlowStats,
}

impl<'a> FlowEngine<'a> {
    pub fn new(space: &'a PointSet, filtration: &'a Filtration, field: Zp, config: FlowConfig) -> Self {
        let m = space.solver_points().len();
        let mut order: Vec<usize> = (0..space.len()).collect();
        if let Some(seed) = config.order_seed {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm = order.clone();
            perm.shuffle(&mut rng);
            for (rank, &i) in perm.iter().enumerate() {
                order[i] = rank;
            }
        }
        FlowEngine {
            space,
            filtration,
            field,
            solver: SeparationSolver::new(config.solver, m, config.seed),
            config,
            cache: HashMap::new(),
            order,
            stamp: vec![0; m],
            pos: vec![0; m],
            generation: 0,
            stats: FlowStats::default(),
        }
    }

    pub fn field(&self) -> Zp {
        self.field
    }

    pub fn space(&self) -> &'a PointSet {
        self.space
    }

    pub fn filtration(&self) -> &'a Filtration {
        self.filtration
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    fn key(&self, c: usize) -> usize {
        let n = self.space.len();
        self.order[c % n] * 9 + c / n
    }

    /// Discrete gradient at `q`.
    pub fn psi(&mut self, q: &Simplex) -> Result<Gradient, FlowError> {
        if let Some(&g) = self.cache.get(q) {
            self.stats.cache_hits += 1;
            return Ok(g);
        }
        let g = self.compute_psi(q)?;
        self.cache.insert(*q, g);
        Ok(g)
    }

    fn compute_psi(&mut self, q: &Simplex) -> Result<Gradient, FlowError> {
        if q.dim() == 0 || self.filtration.contains(q) {
            return Ok(Gradient::Critical);
        }
        self.stats.psi_evaluations += 1;
        let started = Instant::now();
        let pts = self.space.solver_points();
        let lift = self.space.lift(q);
        let s0 = self.space.checked_miniball(q)?;

        // points strictly inside the enclosing sphere, in vertex order; all
        // others start out in A
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let gen = self.generation;
        let mut inside: Vec<(usize, usize)> = (0..pts.len())
            .filter(|&i| side_of(pts, &s0, i) == Side::Inside)
            .map(|i| (self.key(i), i))
            .collect();
        self.stats.solver.side_tests += pts.len() as u64;
        inside.sort_unstable();
        for (k, &(_, i)) in inside.iter().enumerate() {
            self.stamp[i] = gen;
            self.pos[i] = k as u32;
        }

        let mut sphere = s0;
        let mut cursor = 0;
        let result = loop {
            let Some(k) =
                (cursor..inside.len()).find(|&k| side_of(pts, &sphere, inside[k].1) == Side::Inside)
            else {
                break Err(FlowError::InternalInvariantViolation(format!(
                    "gradient sweep of non-Delaunay simplex {q:?} found no vertex"
                )));
            };
            let x = inside[k].1;
            let (stamp, pos) = (&self.stamp, &self.pos);
            let in_a = |i: usize| stamp[i] != gen || pos[i] as usize <= k;
            let on: Vec<usize> = lift.iter().copied().filter(|&i| in_a(i)).collect();
            let role = |i: usize| match (lift.contains(&i), in_a(i)) {
                (true, true) => Some(Role::Both),
                (true, false) => Some(Role::Q),
                (false, true) => Some(Role::A),
                (false, false) => None,
            };
            match self.solver.solve(pts, &on, role) {
                Some(s) => {
                    sphere = s;
                    cursor = k + 1;
                }
                None => break Ok(self.gradient_for(q, &lift, x)),
            }
        };
        self.stats.sphere_time += started.elapsed();
        result?
    }

    fn gradient_for(&self, q: &Simplex, lift: &[usize], x: usize) -> Result<Gradient, FlowError> {
        let xo = self.space.original(x) as u32;
        if let Some(k) = lift.iter().position(|&c| c == x) {
            return Ok(Gradient::Upper { face: q.facet(k) });
        }
        let Some((coface, pos)) = q.with_vertex(xo) else {
            return Err(FlowError::InternalInvariantViolation(format!(
                "gradient vertex {xo} of {q:?} is another copy of a simplex vertex"
            )));
        };
        // grad(P) = -<P, bd Q> Q with <P, bd Q> = (-1)^pos
        let sign = if pos % 2 == 0 { -1 } else { 1 };
        Ok(Gradient::Paired { coface, sign })
    }

    /// Linear extension of the gradient to chains.
    pub fn grad(&mut self, c: &Chain) -> Result<Chain, FlowError> {
        let f = self.field;
        let mut acc: HashMap<Simplex, u32> = HashMap::new();
        for &(s, a) in c.terms() {
            if let Gradient::Paired { coface, sign } = self.psi(&s)? {
                let v = if sign > 0 { a } else { f.neg(a) };
                let e = acc.entry(coface).or_insert(0);
                *e = f.add(*e, v);
            }
        }
        Ok(Chain::from_map(f, acc))
    }

    /// One step of the discrete flow.
    pub fn phi(&mut self, c: &Chain) -> Result<Chain, FlowError> {
        self.stats.phi_applications += 1;
        let g = self.grad(c)?;
        let mut out = c.add(&bd(&g));
        if self.config.variant == FlowVariant::Full && c.dim().is_some_and(|d| d > 0) {
            let gb = self.grad(&bd(c))?;
            if !gb.is_zero() {
                out = out.add(&gb);
            }
        }
        Ok(out)
    }

    /// Iterates the flow until it stabilizes. Returns the limit and the
    /// number of applications, the last of which confirmed stability.
    pub fn phi_star(&mut self, c: &Chain) -> Result<(Chain, usize), FlowError> {
        let cap = self.config.max_iterations.unwrap_or(10 * self.space.len().max(1));
        let mut cur = c.clone();
        for it in 1..=cap {
            let next = self.phi(&cur)?;
            if next == cur {
                return Ok((cur, it));
            }
            cur = next;
        }
        Err(FlowError::IterationLimitExceeded(cap))
    }

    pub fn solver_stats(&self) -> SolverStats {
        let mut s = self.solver.stats;
        s.side_tests += self.stats.solver.side_tests;
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::simplicial::build_filtration;

    fn setup(v: &[(f64, f64)]) -> (PointSet, Filtration) {
        let ps =
            PointSet::euclidean(v.iter().map(|&(x, y)| Point::new(x, y).unwrap()).collect())
                .unwrap();
        let f = build_filtration(&ps).unwrap();
        (ps, f)
    }

    #[test]
    fn boundary_of_edge_and_triangle() {
        let f = Zp::default();
        let e = Chain::simplex(f, Simplex::edge(3, 5), 1);
        assert_eq!(
            bd(&e),
            Chain::from_terms(f, [(Simplex::vertex(5), 1), (Simplex::vertex(3), -1)])
        );
        let t = Chain::simplex(f, Simplex::triangle(0, 1, 2), 1);
        let expect = Chain::from_terms(
            f,
            [(Simplex::edge(1, 2), 1), (Simplex::edge(0, 2), -1), (Simplex::edge(0, 1), 1)],
        );
        assert_eq!(bd(&t), expect);
        assert!(bd(&bd(&t)).is_zero());
    }

    #[test]
    fn square_diagonal_flows_to_delaunay_edges() {
        // slightly skewed square so the 0-2 diagonal is clearly not Delaunay
        let (ps, filt) = setup(&[(0.0, 0.0), (1.0, 0.0), (1.1, 1.0), (0.0, 1.0)]);
        assert!(!filt.contains(&Simplex::edge(0, 2)));
        let mut eng = FlowEngine::new(&ps, &filt, Zp::default(), FlowConfig::default());
        let g = eng.psi(&Simplex::edge(0, 2)).unwrap();
        let Gradient::Paired { coface, .. } = g else { panic!("{g:?}") };
        assert!(coface == Simplex::triangle(0, 1, 2) || coface == Simplex::triangle(0, 2, 3));
        assert_eq!(
            ps.cech_radius(&Simplex::edge(0, 2)).unwrap(),
            ps.cech_radius(&coface).unwrap()
        );
        assert_eq!(eng.psi(&coface).unwrap(), Gradient::Upper { face: Simplex::edge(0, 2) });

        // cycle around the triangle on the other side of the diagonal
        let f = Zp::default();
        let w = if coface.contains(1) { 3 } else { 1 };
        let cyc = bd(&Chain::simplex(f, Simplex::triangle(0, 2, w), 1));
        let out = eng.phi(&cyc).unwrap();
        assert!(bd(&out).is_zero());
        assert_eq!(out.coef(&Simplex::edge(0, 2)), 0);
        assert_eq!(out.len(), 4);
        assert!(out.support().all(|s| filt.contains(s)));
        let diff = out.sub(&cyc);
        let tri = bd(&Chain::simplex(f, coface, 1));
        let c = diff.coef(&Simplex::edge(0, 2));
        assert_eq!(diff, tri.scale(f.mul(c, f.inv(tri.coef(&Simplex::edge(0, 2))))));
        let (star, its) = eng.phi_star(&cyc).unwrap();
        assert_eq!(star, out);
        assert_eq!(its, 2);
    }

    #[test]
    fn delaunay_chain_is_fixed() {
        let (ps, filt) = setup(&[(0.0, 0.0), (2.0, 0.1), (0.9, 1.5), (1.0, -1.3)]);
        let mut eng = FlowEngine::new(&ps, &filt, Zp::default(), FlowConfig::default());
        let tri = filt.entries().iter().find(|e| e.simplex.dim() == 2).unwrap().simplex;
        let c = bd(&Chain::simplex(Zp::default(), tri, 3));
        let (out, its) = eng.phi_star(&c).unwrap();
        assert_eq!(out, c);
        assert_eq!(its, 1);
        assert_eq!(eng.psi(&tri).unwrap(), Gradient::Critical);
    }

    #[test]
    fn chain_arithmetic() {
        let f = Zp::new(7).unwrap();
        let a = Chain::from_terms(f, [(Simplex::edge(0, 1), 3), (Simplex::edge(1, 2), 5)]);
        let b = Chain::from_terms(f, [(Simplex::edge(0, 1), 4)]);
        let s = a.add(&b);
        assert_eq!(s.len(), 1);
        assert_eq!(s.coef(&Simplex::edge(1, 2)), 5);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.scale(2).coef(&Simplex::edge(0, 1)), 6);
    }
}
