//! Eigenspaces of the pair of maps induced on first homology by inclusion
//! and by the sampled map, and the persistence of these eigenspaces across
//! the filtration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{EigenError, FlowError, GeometryError};
use crate::field::{Mat, Reducer, Zp};
use crate::morse_flow::{Chain, FlowEngine};
use crate::persistence::{Decomposition, Persistence, PersistenceDiagram};
use crate::simplicial::{Filtration, Simplex};

/// Image of a generator loop under the map followed by the flow.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopImage {
    pub decomposition: Decomposition,
    pub iterations: usize,
}

/// Pushes a 1-chain through a vertex map. Edges whose endpoints collapse are
/// dropped.
pub fn push_forward(c: &Chain, map: &[usize]) -> Chain {
    let f = c.field();
    Chain::from_terms(
        f,
        c.terms().iter().filter_map(|&(s, a)| {
            let v = s.vertices();
            let (ga, gb) = (map[v[0] as usize] as u32, map[v[1] as usize] as u32);
            let a = f.signed(a);
            match ga.cmp(&gb) {
                std::cmp::Ordering::Less => Some((Simplex::edge(ga, gb), a)),
                std::cmp::Ordering::Greater => Some((Simplex::edge(gb, ga), -a)),
                std::cmp::Ordering::Equal => None,
            }
        }),
    )
}

/// Flowed images of all generators that carry a diagram interval. Entry `g`
/// is `None` for generators with an empty interval.
pub fn loop_images(
    engine: &mut FlowEngine,
    pers: &Persistence,
    map: &[usize],
) -> Result<Vec<Option<LoopImage>>, EigenError> {
    let filt = engine.filtration();
    let mut out = Vec::with_capacity(pers.generators().len());
    for (g, gen) in pers.generators().iter().enumerate() {
        let Some(interval) = gen.interval else {
            out.push(None);
            continue;
        };
        let image = push_forward(&pers.rep_chain(filt, g), map);
        let (flowed, iterations) = engine.phi_star(&image).map_err(|e| match e {
            FlowError::Geometry(GeometryError::PeriodicRadius { .. }) => {
                EigenError::LipschitzOverflow { interval }
            }
            e => e.into(),
        })?;
        let decomposition = pers.decompose(filt, &flowed)?;
        out.push(Some(LoopImage { decomposition, iterations }));
    }
    Ok(out)
}

/// The inclusion-induced and map-induced homomorphisms from the first
/// homology of `K_i` to that of `K_j`, in generator bases.
#[derive(Clone, Debug, PartialEq)]
pub struct MapPair {
    pub rank_i: usize,
    pub rank_j: usize,
    /// generators spanning the source
    pub cols: Vec<usize>,
    /// generators spanning the target
    pub rows: Vec<usize>,
    pub iota: Mat,
    pub kappa: Mat,
}

/// Connected block of a map pair after permuting rows and columns.
#[derive(Clone, Debug)]
struct Block {
    cols: Vec<usize>,
    kappa: Mat,
    iota: Mat,
    /// basis of the common kernel
    common: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
struct Event {
    rank: usize,
    blocks: Vec<Block>,
    /// generator -> (block, position) for generators in some block
    place: HashMap<usize, (usize, usize)>,
}

/// All map pairs of a filtration, stored at the ranks where they change.
#[derive(Clone, Debug)]
pub struct MapPairs {
    field: Zp,
    /// per rank: target rank of the map pair
    rank_j: Vec<usize>,
    events: Vec<Event>,
}

fn matrices(images: &[Option<LoopImage>], cols: &[usize], rows: &[usize]) -> (Mat, Mat) {
    let row_of: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &g)| (g, k)).collect();
    let mut kappa = Mat::zeros(rows.len(), cols.len());
    let mut iota = Mat::zeros(rows.len(), cols.len());
    for (c, &g) in cols.iter().enumerate() {
        if let Some(&r) = row_of.get(&g) {
            iota.set(r, c, 1);
        }
        let img = images[g].as_ref().expect("alive generators have images");
        for &(h, a) in &img.decomposition.coeffs {
            if let Some(&r) = row_of.get(&h) {
                kappa.set(r, c, a);
            }
        }
    }
    (kappa, iota)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl MapPairs {
    pub fn new(filt: &Filtration, pers: &Persistence, images: &[Option<LoopImage>]) -> Self {
        let n = filt.num_ranks();
        let gens = pers.generators();
        let mut changes = vec![0usize; n + 1];
        let mut born: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut dies: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (g, gen) in gens.iter().enumerate() {
            if gen.interval.is_none() {
                continue;
            }
            changes[gen.birth_rank] += 1;
            born[gen.birth_rank].push(g);
            if let Some(d) = gen.death_rank {
                changes[d] += 1;
                dies[d].push(g);
            }
        }
        let mut version = vec![0usize; n];
        let mut acc = 0;
        for i in 0..n {
            acc += changes[i];
            version[i] = acc;
        }

        // sweep the ranks keeping the support ranks of the live images; once
        // a loop dies its image must have become a boundary as well
        let last = n.saturating_sub(1);
        let support = |g: usize| images[g].as_ref().map_or(0, |im| im.decomposition.support_rank);
        let killed = |g: usize| {
            images[g].as_ref().map_or(0, |im| {
                im.decomposition
                    .coeffs
                    .iter()
                    .map(|&(h, _)| gens[h].death_rank.unwrap_or(last))
                    .max()
                    .unwrap_or(0)
                    .max(im.decomposition.support_rank)
            })
        };
        let mut live: BTreeMap<usize, usize> = BTreeMap::new();
        let mut dead_max = 0;
        let mut rank_j = vec![0usize; n];
        for i in 0..n {
            for &g in &dies[i] {
                let s = support(g);
                let e = live.get_mut(&s).expect("live image");
                *e -= 1;
                if *e == 0 {
                    live.remove(&s);
                }
                dead_max = dead_max.max(killed(g));
            }
            for &g in &born[i] {
                *live.entry(support(g)).or_insert(0) += 1;
            }
            let alive_max = live.last_key_value().map_or(0, |(&s, _)| s);
            rank_j[i] = i.max(alive_max).max(dead_max);
        }

        let mut events = Vec::new();
        let mut prev = None;
        for i in 0..n {
            let key = (version[i], version[rank_j[i]]);
            if prev == Some(key) {
                continue;
            }
            prev = Some(key);
            events.push(Self::event(pers, images, i, rank_j[i]));
        }
        MapPairs { field: pers.field(), rank_j, events }
    }

    fn event(pers: &Persistence, images: &[Option<LoopImage>], i: usize, j: usize) -> Event {
        let f = pers.field();
        let cols = pers.basis_at(i);
        let rows = pers.basis_at(j);
        let (kappa, iota) = matrices(images, &cols, &rows);
        let (nc, nr) = (cols.len(), rows.len());
        let mut parent: Vec<usize> = (0..nc + nr).collect();
        for c in 0..nc {
            for r in 0..nr {
                if kappa.get(r, c) != 0 || iota.get(r, c) != 0 {
                    let (a, b) = (find(&mut parent, c), find(&mut parent, nc + r));
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for c in 0..nc {
            let root = find(&mut parent, c);
            groups.entry(root).or_default().0.push(c);
        }
        for r in 0..nr {
            let root = find(&mut parent, nc + r);
            groups.entry(root).or_default().1.push(r);
        }
        let mut blocks = Vec::new();
        let mut place = HashMap::new();
        let mut ordered: Vec<(Vec<usize>, Vec<usize>)> =
            groups.into_values().filter(|(c, r)| !c.is_empty() && !r.is_empty()).collect();
        ordered.sort();
        for (bc, br) in ordered {
            let sub = |m: &Mat| {
                Mat::from_rows(
                    &br.iter().map(|&r| bc.iter().map(|&c| m.get(r, c)).collect()).collect::<Vec<_>>(),
                )
            };
            let (k, io) = (sub(&kappa), sub(&iota));
            let common = k.vstack(&io).nullspace(f);
            let b = blocks.len();
            for (pos, &c) in bc.iter().enumerate() {
                place.insert(cols[c], (b, pos));
            }
            blocks.push(Block { cols: bc.iter().map(|&c| cols[c]).collect(), kappa: k, iota: io, common });
        }
        Event { rank: i, blocks, place }
    }

    pub fn field(&self) -> Zp {
        self.field
    }

    /// Target rank of the map pair at each rank.
    pub fn rank_j(&self) -> &[usize] {
        &self.rank_j
    }

    /// Ranks at which the map pair changes.
    pub fn event_ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.events.iter().map(|e| e.rank)
    }

    pub fn num_events(&self) -> usize {
        self.events.len()
    }

    /// Distinct blocks of all map pairs, as `(kappa, iota)`.
    fn unique_blocks(&self) -> Vec<(&Mat, &Mat)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for b in self.events.iter().flat_map(|e| &e.blocks) {
            if seen.insert((&b.kappa.data, &b.iota.data, b.kappa.rows, b.kappa.cols)) {
                out.push((&b.kappa, &b.iota));
            }
        }
        out
    }
}

/// Map pair for source rank `rank_i`.
pub fn build_map_pair(
    rank_i: usize,
    pairs: &MapPairs,
    pers: &Persistence,
    images: &[Option<LoopImage>],
) -> MapPair {
    let rank_j = pairs.rank_j[rank_i];
    let cols = pers.basis_at(rank_i);
    let rows = pers.basis_at(rank_j);
    let (kappa, iota) = matrices(images, &cols, &rows);
    MapPair { rank_i, rank_j, cols, rows, iota, kappa }
}

/// Eigenspace data of one block for one eigenvalue.
struct Quotient {
    /// reducer holding the common kernel followed by the kernel of
    /// `kappa - t iota`
    reducer: Reducer,
    /// inserted-vector index of each basis vector of the quotient
    ids: Vec<usize>,
    basis: Vec<Vec<u32>>,
}

fn quotient(f: Zp, kappa: &Mat, iota: &Mat, common: &[Vec<u32>], t: u32) -> Option<Quotient> {
    let kernel = kappa.sub_scaled(f, t, iota).nullspace(f);
    if kernel.len() <= common.len() {
        return None;
    }
    let mut reducer = Reducer::new(f, kappa.cols, true);
    for v in common {
        reducer.insert(v);
    }
    let mut ids = Vec::new();
    let mut basis = Vec::new();
    for (k, v) in kernel.into_iter().enumerate() {
        if reducer.insert(&v) {
            ids.push(common.len() + k);
            basis.push(v);
        }
    }
    Some(Quotient { reducer, ids, basis })
}

/// Basis of `ker(kappa - t iota)` modulo `ker kappa ∩ ker iota`, lifted to
/// vectors in the kernel.
pub fn eigenspace(f: Zp, pair: &MapPair, t: u32) -> Vec<Vec<u32>> {
    let common = pair.kappa.vstack(&pair.iota).nullspace(f);
    quotient(f, &pair.kappa, &pair.iota, &common, t).map_or(Vec::new(), |q| q.basis)
}

/// Dimension of the eigenspace for `t`.
pub fn eigenspace_dim(f: Zp, kappa: &Mat, iota: &Mat, t: u32) -> usize {
    let k = kappa.cols - kappa.sub_scaled(f, t, iota).rank(f);
    let d = kappa.cols - kappa.vstack(iota).rank(f);
    k - d
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenInterval {
    pub birth: f64,
    pub death: Option<f64>,
    pub birth_rank: usize,
    pub death_rank: Option<usize>,
}

impl EigenInterval {
    pub fn persistence(&self, end: f64) -> f64 {
        self.death.unwrap_or(end) - self.birth
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenspaceDiagram {
    pub t: u32,
    pub intervals: Vec<EigenInterval>,
    /// representatives whose image left the eigenspace; zero unless the
    /// target ranks were chosen too small
    #[serde(default)]
    pub violations: usize,
}

impl EigenspaceDiagram {
    /// Intervals whose persistence exceeds `threshold`, measuring essential
    /// ones up to `end`.
    pub fn significant(&self, threshold: f64, end: f64) -> Vec<&EigenInterval> {
        self.intervals.iter().filter(|iv| iv.persistence(end) > threshold).collect()
    }
}

struct Bar {
    birth_rank: usize,
    rep: Vec<(usize, u32)>,
}

/// Interval decomposition of the tower of eigenspaces for eigenvalue `t`.
pub fn eigenspace_module(pairs: &MapPairs, filt: &Filtration, t: u32) -> EigenspaceDiagram {
    let f = pairs.field;
    let values = filt.critical_values();
    let mut violations = 0;
    let mut live: Vec<Bar> = Vec::new();
    let mut intervals = Vec::new();
    let close = |birth_rank: usize, death_rank: Option<usize>| EigenInterval {
        birth: values[birth_rank],
        death: death_rank.map(|d| values[d]),
        birth_rank,
        death_rank,
    };

    for ev in &pairs.events {
        let quotients: Vec<Option<Quotient>> =
            ev.blocks.iter().map(|b| quotient(f, &b.kappa, &b.iota, &b.common, t)).collect();
        let mut offset = Vec::with_capacity(quotients.len());
        let mut dim = 0;
        for q in &quotients {
            offset.push(dim);
            dim += q.as_ref().map_or(0, |q| q.ids.len());
        }

        // coordinates of a representative in the quotient basis
        let mut coords = |rep: &[(usize, u32)]| -> Vec<u32> {
            let mut local: Vec<Vec<u32>> =
                ev.blocks.iter().map(|b| vec![0u32; b.cols.len()]).collect();
            for &(g, a) in rep {
                if let Some(&(b, p)) = ev.place.get(&g) {
                    local[b][p] = a;
                }
            }
            let mut out = vec![0u32; dim];
            for (b, v) in local.iter().enumerate() {
                if v.iter().all(|&x| x == 0) {
                    continue;
                }
                match &quotients[b] {
                    Some(q) => match q.reducer.express(v) {
                        Some(comb) => {
                            for (m, &id) in q.ids.iter().enumerate() {
                                out[offset[b] + m] = comb[id];
                            }
                        }
                        None => violations += 1,
                    },
                    None => {
                        let blk = &ev.blocks[b];
                        let img = blk.kappa.sub_scaled(f, t, &blk.iota).mul_vec(f, v);
                        if img.iter().any(|&x| x != 0) {
                            violations += 1;
                        }
                    }
                }
            }
            out
        };
        let lift = |x: &[u32]| -> Vec<(usize, u32)> {
            let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
            for (b, q) in quotients.iter().enumerate() {
                let Some(q) = q else { continue };
                for (m, v) in q.basis.iter().enumerate() {
                    let c = x[offset[b] + m];
                    if c == 0 {
                        continue;
                    }
                    for (p, &y) in v.iter().enumerate() {
                        if y != 0 {
                            let e = acc.entry(ev.blocks[b].cols[p]).or_insert(0);
                            *e = f.add(*e, f.mul(c, y));
                        }
                    }
                }
            }
            acc.into_iter().filter(|e| e.1 != 0).collect()
        };

        let mut red = Reducer::new(f, dim, false);
        let mut next = Vec::with_capacity(live.len());
        for bar in live.drain(..) {
            let x = coords(&bar.rep);
            let (r, _) = red.reduce(&x);
            if r.iter().all(|&v| v == 0) {
                intervals.push(close(bar.birth_rank, Some(ev.rank)));
            } else {
                red.insert(&x);
                next.push(Bar { birth_rank: bar.birth_rank, rep: lift(&r) });
            }
        }
        for k in 0..dim {
            let mut e = vec![0u32; dim];
            e[k] = 1;
            if red.insert(&e) {
                next.push(Bar { birth_rank: ev.rank, rep: lift(&e) });
            }
        }
        live = next;
    }
    for bar in live {
        intervals.push(close(bar.birth_rank, None));
    }
    intervals.sort_by(|a, b| {
        (a.birth_rank, a.death_rank.unwrap_or(usize::MAX))
            .cmp(&(b.birth_rank, b.death_rank.unwrap_or(usize::MAX)))
    });
    EigenspaceDiagram { t, intervals, violations }
}

/// Eigenvalues to analyse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sweep {
    /// every element of the field
    Full,
    /// exactly the given values
    List(Vec<u32>),
    /// every element for small primes, otherwise the given values together
    /// with every value at which some block has a nonzero eigenspace
    Auto(Vec<u32>),
}

/// Largest prime for which the automatic sweep covers the whole field.
pub const FULL_SWEEP_MAX_PRIME: u32 = 101;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Candidates {
    pub values: Vec<u32>,
    /// blocks whose eigenspace is nonzero for every value
    pub singular_blocks: usize,
}

/// Values of `t` at which some block of some map pair has a nonzero
/// eigenspace, skipping blocks where this holds for every `t`.
pub fn candidate_eigenvalues(pairs: &MapPairs) -> Candidates {
    let f = pairs.field;
    let mut found = BTreeSet::new();
    let mut singular = 0;
    for (kappa, iota) in pairs.unique_blocks() {
        let hits: Vec<u32> =
            (0..f.p()).filter(|&t| eigenspace_dim(f, kappa, iota, t) > 0).collect();
        if hits.len() == f.p() as usize {
            singular += 1;
        } else {
            found.extend(hits);
        }
    }
    Candidates { values: found.into_iter().collect(), singular_blocks: singular }
}

pub fn sweep_values(pairs: &MapPairs, sweep: &Sweep) -> Vec<u32> {
    let p = pairs.field.p();
    let mut vals: BTreeSet<u32> = match sweep {
        Sweep::Full => (0..p).collect(),
        Sweep::List(v) => v.iter().copied().collect(),
        Sweep::Auto(_) if p <= FULL_SWEEP_MAX_PRIME => (0..p).collect(),
        Sweep::Auto(v) => {
            let mut s: BTreeSet<u32> = v.iter().copied().collect();
            s.extend(candidate_eigenvalues(pairs).values);
            s
        }
    };
    vals.retain(|&t| t < p);
    vals.into_iter().collect()
}

/// Eigenspace diagrams for the given values, computed on up to `threads`
/// threads. The output is ordered by `t`.
pub fn eigenspace_diagrams(
    pairs: &MapPairs,
    filt: &Filtration,
    values: &[u32],
    threads: usize,
) -> Vec<EigenspaceDiagram> {
    let threads = threads.max(1).min(values.len().max(1));
    if threads == 1 {
        return values.iter().map(|&t| eigenspace_module(pairs, filt, t)).collect();
    }
    let chunk = values.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = values
            .chunks(chunk)
            .map(|ts| {
                s.spawn(move || {
                    ts.iter().map(|&t| eigenspace_module(pairs, filt, t)).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Largest persistence in the first homology diagram, measuring essential
/// classes up to the last critical value.
pub fn max_h1_persistence(diagram: &PersistenceDiagram, filt: &Filtration) -> f64 {
    let end = filt.critical_values().last().copied().unwrap_or(0.0);
    diagram.dim(1).map(|iv| iv.persistence(end)).fold(0.0, f64::max)
}

/// Number of intervals containing the window from `delta` to `rho + delta`.
pub fn inferred_eigendimension(
    diagram: &EigenspaceDiagram,
    delta: f64,
    rho: f64,
    filt: &Filtration,
) -> Result<usize, EigenError> {
    let last = filt.critical_values().last().copied().unwrap_or(0.0);
    if rho + delta > last {
        return Err(EigenError::OutOfRange(rho + delta));
    }
    let (Some(i), Some(j)) = (filt.rank_at(delta), filt.rank_at(rho + delta)) else {
        return Ok(0);
    };
    Ok(diagram
        .intervals
        .iter()
        .filter(|iv| iv.birth_rank <= i && iv.death_rank.is_none_or(|d| d > j))
        .count())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ShiftStats {
    pub mean: f64,
    pub max: f64,
    pub samples: usize,
}

/// Statistics of `s / r` over every rank `i` with radius `r` and every loop
/// alive there, where `s` is the radius of the first complex containing both
/// the loop and its flowed image.
pub fn shift_stats(filt: &Filtration, pers: &Persistence, images: &[Option<LoopImage>]) -> ShiftStats {
    let values = filt.critical_values();
    let n = values.len();
    let (mut sum, mut max, mut count) = (0.0, 0.0f64, 0usize);
    for (g, im) in pers.generators().iter().zip(images) {
        let Some(im) = im else { continue };
        let support = im.decomposition.support_rank;
        for i in g.birth_rank..g.death_rank.unwrap_or(n) {
            let r = values[i];
            if r <= 0.0 {
                continue;
            }
            let ratio = values[i.max(support)] / r;
            sum += ratio;
            max = max.max(ratio);
            count += 1;
        }
    }
    ShiftStats { mean: if count == 0 { 0.0 } else { sum / count as f64 }, max, samples: count }
}

/// Ranks whose target radius exceeds `lambda` times the source radius.
pub fn radius_bound_violations(pairs: &MapPairs, filt: &Filtration, lambda: f64) -> usize {
    let values = filt.critical_values();
    pairs
        .rank_j
        .iter()
        .enumerate()
        .filter(|&(i, &j)| j > i && values[j] > lambda * values[i] * (1.0 + 1e-9))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[u32]]) -> Mat {
        Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn identity_pair() {
        let f = Zp::new(7).unwrap();
        let id = mat(&[&[1, 0], &[0, 1]]);
        let pair = MapPair {
            rank_i: 0,
            rank_j: 0,
            cols: vec![0, 1],
            rows: vec![0, 1],
            iota: id.clone(),
            kappa: id.clone(),
        };
        assert_eq!(eigenspace(f, &pair, 1).len(), 2);
        for t in [0, 2, 6] {
            assert!(eigenspace(f, &pair, t).is_empty());
        }
    }

    #[test]
    fn common_kernel_is_quotiented() {
        let f = Zp::new(5).unwrap();
        // second column maps to zero under both maps
        let kappa = mat(&[&[2, 0]]);
        let iota = mat(&[&[1, 0]]);
        assert_eq!(eigenspace_dim(f, &kappa, &iota, 2), 1);
        assert_eq!(eigenspace_dim(f, &kappa, &iota, 3), 0);
    }

    #[test]
    fn swap_has_both_signs() {
        let f = Zp::new(11).unwrap();
        let kappa = mat(&[&[0, 1], &[1, 0]]);
        let iota = mat(&[&[1, 0], &[0, 1]]);
        assert_eq!(eigenspace_dim(f, &kappa, &iota, 1), 1);
        assert_eq!(eigenspace_dim(f, &kappa, &iota, 10), 1);
        assert_eq!(eigenspace_dim(f, &kappa, &iota, 2), 0);
    }

    #[test]
    fn push_forward_drops_collapsed_edges() {
        let f = Zp::default();
        let c = Chain::from_terms(
            f,
            [(Simplex::edge(0, 1), 1), (Simplex::edge(1, 2), 1), (Simplex::edge(0, 2), -1)],
        );
        let img = push_forward(&c, &[2, 0, 0]);
        // [0,1] -> [0,2] reversed, [1,2] collapses, [0,2] -> [0,2] reversed
        assert_eq!(img, Chain::from_terms(f, [(Simplex::edge(0, 2), -1 + 1)]));
        let img = push_forward(&c, &[1, 2, 0]);
        assert_eq!(
            img,
            Chain::from_terms(
                f,
                [(Simplex::edge(1, 2), 1), (Simplex::edge(0, 2), -1), (Simplex::edge(0, 1), 1)]
            )
        );
    }
}
