//! Persistent homology of a filtration over Z_p, with representative cycles
//! and coordinates of arbitrary 1-cycles in the homology bases.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::CoordError;
use crate::field::Zp;
use crate::morse_flow::{bd, Chain};
use crate::simplicial::Filtration;

const NONE: u32 = u32::MAX;

type Column = Vec<(u32, u32)>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    /// `None` for essential classes
    pub death: Option<f64>,
    pub birth_rank: usize,
    pub death_rank: Option<usize>,
}

impl Interval {
    /// Length of the interval, measuring essential classes up to `end`.
    pub fn persistence(&self, end: f64) -> f64 {
        self.death.unwrap_or(end) - self.birth
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PersistenceDiagram {
    pub pairs: Vec<Interval>,
}

impl PersistenceDiagram {
    pub fn dim(&self, d: usize) -> impl Iterator<Item = &Interval> {
        self.pairs.iter().filter(move |p| p.dim == d)
    }

    /// Rank of the map induced on `dim`-homology by `K_i -> K_j`.
    pub fn image_rank(&self, dim: usize, i: usize, j: usize) -> usize {
        assert!(i <= j);
        self.dim(dim).filter(|p| p.birth_rank <= i && p.death_rank.is_none_or(|d| d > j)).count()
    }
}

/// A 1-cycle created by a positive edge. Together these cycles form a basis
/// of the cycle space of the final complex; those alive at rank `i` form a
/// homology basis of `K_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    /// filtration index of the creating edge, where the cycle has
    /// coefficient one and its highest index
    pub birth_index: usize,
    pub birth_rank: usize,
    pub death_rank: Option<usize>,
    /// entries `(filtration index, coefficient)`, sorted by index
    pub rep: Vec<(usize, u32)>,
    /// position in the diagram, unless the interval is empty
    pub interval: Option<usize>,
}

impl Generator {
    pub fn alive_at(&self, rank: usize) -> bool {
        self.birth_rank <= rank && self.death_rank.is_none_or(|d| rank < d)
    }
}

/// Result of reducing the boundary matrix of a filtration.
#[derive(Clone, Debug)]
pub struct Persistence {
    field: Zp,
    diagram: PersistenceDiagram,
    generators: Vec<Generator>,
    generator_of: Vec<u32>,
}

fn low(c: &Column) -> Option<u32> {
    c.last().map(|e| e.0)
}

/// `a - c * b` for sorted sparse columns.
fn axpy(f: Zp, a: &Column, c: u32, b: &Column) -> Column {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.neg(f.mul(c, b[j].1))));
            j += 1;
        } else {
            let v = f.sub(a[i].1, f.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn boundary_column(f: Zp, filt: &Filtration, i: usize) -> Column {
    let mut col: Column = filt
        .boundary(i)
        .into_iter()
        .map(|(j, s)| (j as u32, f.from_i64(s as i64)))
        .collect();
    col.sort_unstable();
    col
}

/// Column reduction with clearing. Triangles are reduced first so that the
/// edges they kill need no work; edge columns track their reduction so that
/// essential cycles come out directly.
pub fn reduce(filt: &Filtration, field: Zp) -> Persistence {
    let f = field;
    let m = filt.len();
    let entries = filt.entries();
    let mut pivot_of: Vec<u32> = vec![NONE; m];
    let mut reduced: Vec<Column> = vec![Vec::new(); m];
    let mut vcols: Vec<Column> = vec![Vec::new(); m];
    let mut cleared = vec![false; m];

    for dim in [2usize, 1] {
        for j in 0..m {
            if entries[j].simplex.dim() != dim || cleared[j] {
                continue;
            }
            let mut col = boundary_column(f, filt, j);
            let mut v: Column = if dim == 1 { vec![(j as u32, 1)] } else { Vec::new() };
            while let Some(l) = low(&col) {
                let k = pivot_of[l as usize];
                if k == NONE {
                    break;
                }
                let k = k as usize;
                let lead = reduced[k].last().expect("pivot column is nonzero").1;
                let c = f.mul(col.last().unwrap().1, f.inv(lead));
                col = axpy(f, &col, c, &reduced[k]);
                if dim == 1 {
                    v = axpy(f, &v, c, &vcols[k]);
                }
            }
            if let Some(l) = low(&col) {
                pivot_of[l as usize] = j as u32;
                if dim == 2 {
                    cleared[l as usize] = true;
                }
            }
            reduced[j] = col;
            if dim == 1 {
                vcols[j] = v;
            }
        }
    }

    let rank = |i: usize| entries[i].rank;
    let value = |i: usize| entries[i].radius;
    let mut pairs = Vec::new();
    let mut generators = Vec::new();
    let mut generator_of = vec![NONE; m];
    let push_interval = |dim: usize, b: usize, d: Option<usize>, pairs: &mut Vec<Interval>| {
        if d.is_some_and(|d| rank(d) == rank(b)) {
            return None;
        }
        pairs.push(Interval {
            dim,
            birth: value(b),
            death: d.map(value),
            birth_rank: rank(b),
            death_rank: d.map(rank),
        });
        Some(pairs.len() - 1)
    };

    for i in 0..m {
        let dim = entries[i].simplex.dim();
        let killer = pivot_of[i];
        let killer = (killer != NONE).then_some(killer as usize);
        match dim {
            0 => {
                push_interval(0, i, killer, &mut pairs);
            }
            1 => {
                if !reduced[i].is_empty() {
                    continue;
                }
                let rep: Vec<(usize, u32)> = match killer {
                    Some(t) => {
                        let col = &reduced[t];
                        let inv = f.inv(col.last().unwrap().1);
                        col.iter().map(|&(r, c)| (r as usize, f.mul(c, inv))).collect()
                    }
                    None => vcols[i].iter().map(|&(r, c)| (r as usize, c)).collect(),
                };
                debug_assert_eq!(rep.last(), Some(&(i, 1)));
                let interval = push_interval(1, i, killer, &mut pairs);
                generator_of[i] = generators.len() as u32;
                generators.push(Generator {
                    birth_index: i,
                    birth_rank: rank(i),
                    death_rank: killer.map(rank),
                    rep,
                    interval,
                });
            }
            _ => {
                if reduced[i].is_empty() && !cleared[i] {
                    push_interval(dim, i, None, &mut pairs);
                }
            }
        }
    }
    Persistence { field, diagram: PersistenceDiagram { pairs }, generators, generator_of }
}

/// Coefficients of a cycle in the generator basis, together with the largest
/// filtration rank of its support.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub coeffs: Vec<(usize, u32)>,
    pub support_rank: usize,
}

impl Decomposition {
    /// Coordinates in the homology basis of `K_rank` listed by `basis`.
    pub fn coordinates(&self, basis: &[usize]) -> Vec<u32> {
        basis
            .iter()
            .map(|g| self.coeffs.iter().find(|c| c.0 == *g).map_or(0, |c| c.1))
            .collect()
    }
}

impl Persistence {
    pub fn field(&self) -> Zp {
        self.field
    }

    pub fn diagram(&self) -> &PersistenceDiagram {
        &self.diagram
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generators forming a basis of the first homology of `K_rank`.
    pub fn basis_at(&self, rank: usize) -> Vec<usize> {
        (0..self.generators.len()).filter(|&g| self.generators[g].alive_at(rank)).collect()
    }

    pub fn rep_chain(&self, filt: &Filtration, g: usize) -> Chain {
        Chain::from_terms(
            self.field,
            self.generators[g].rep.iter().map(|&(i, c)| (filt.entries()[i].simplex, c as i64)),
        )
    }

    /// Writes a 1-cycle as a combination of generator cycles. The result is
    /// independent of the rank at which it is read off.
    pub fn decompose(&self, filt: &Filtration, c: &Chain) -> Result<Decomposition, CoordError> {
        let f = self.field;
        if c.dim().is_some_and(|d| d != 1) || !bd(c).is_zero() {
            return Err(CoordError::NotACycle);
        }
        let mut z: BTreeMap<usize, u32> = BTreeMap::new();
        for &(s, a) in c.terms() {
            let i = filt.index_of(&s).ok_or(CoordError::NotInComplex)?;
            z.insert(i, a);
        }
        let support_rank = z.keys().map(|&i| filt.entries()[i].rank).max().unwrap_or(0);
        let mut coeffs = Vec::new();
        while let Some((&l, &a)) = z.last_key_value() {
            let g = self.generator_of[l];
            if g == NONE {
                return Err(CoordError::NotACycle);
            }
            coeffs.push((g as usize, a));
            for &(i, b) in &self.generators[g as usize].rep {
                let e = z.entry(i).or_insert(0);
                *e = f.sub(*e, f.mul(a, b));
                if *e == 0 {
                    z.remove(&i);
                }
            }
        }
        coeffs.sort_unstable();
        Ok(Decomposition { coeffs, support_rank })
    }

    /// Coordinates of the class of `c` in the basis [`Self::basis_at`] of
    /// `K_rank`.
    pub fn class_coordinates(
        &self,
        filt: &Filtration,
        c: &Chain,
        rank: usize,
    ) -> Result<Vec<u32>, CoordError> {
        let d = self.decompose(filt, c)?;
        if !c.is_zero() && d.support_rank > rank {
            return Err(CoordError::NotInComplex);
        }
        Ok(d.coordinates(&self.basis_at(rank)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::Simplex;

    fn filt(items: &[(&[u32], f64)]) -> Filtration {
        Filtration::from_simplices(
            items.iter().map(|&(v, r)| (Simplex::new(v).unwrap(), r)).collect(),
        )
    }

    fn hollow_then_filled() -> Filtration {
        filt(&[
            (&[0], 0.0),
            (&[1], 0.0),
            (&[2], 0.0),
            (&[0, 1], 1.0),
            (&[1, 2], 2.0),
            (&[0, 2], 3.0),
            (&[0, 1, 2], 4.0),
        ])
    }

    #[test]
    fn triangle_gives_one_loop() {
        let fl = hollow_then_filled();
        let p = reduce(&fl, Zp::default());
        let h1: Vec<&Interval> = p.diagram().dim(1).collect();
        assert_eq!(h1.len(), 1);
        assert_eq!((h1[0].birth, h1[0].death), (3.0, Some(4.0)));
        let h0: Vec<&Interval> = p.diagram().dim(0).collect();
        assert_eq!(h0.len(), 3);
        assert_eq!(h0.iter().filter(|i| i.death.is_none()).count(), 1);
        let g = &p.generators()[0];
        assert_eq!(g.rep.len(), 3);
        assert!(bd(&p.rep_chain(&fl, 0)).is_zero());
    }

    #[test]
    fn coordinates_of_generator_and_boundary() {
        let fl = hollow_then_filled();
        let p = reduce(&fl, Zp::default());
        let rank = fl.rank_of(&Simplex::edge(0, 2)).unwrap();
        let rep = p.rep_chain(&fl, 0);
        assert_eq!(p.class_coordinates(&fl, &rep, rank).unwrap(), vec![1]);
        assert_eq!(p.class_coordinates(&fl, &rep.scale(5), rank).unwrap(), vec![5]);
        let last = fl.num_ranks() - 1;
        assert!(p.class_coordinates(&fl, &rep, last).unwrap().is_empty());
        let e = Chain::simplex(Zp::default(), Simplex::edge(0, 1), 1);
        assert_eq!(p.class_coordinates(&fl, &e, last), Err(CoordError::NotACycle));
        assert_eq!(p.class_coordinates(&fl, &rep, 0), Err(CoordError::NotInComplex));
    }

    #[test]
    fn two_generators_combine() {
        // two squares sharing the edge 1-4
        let fl = filt(&[
            (&[0], 0.0),
            (&[1], 0.0),
            (&[2], 0.0),
            (&[3], 0.0),
            (&[4], 0.0),
            (&[5], 0.0),
            (&[0, 1], 1.0),
            (&[1, 2], 1.0),
            (&[0, 3], 1.0),
            (&[3, 4], 1.0),
            (&[1, 4], 1.0),
            (&[4, 5], 1.0),
            (&[2, 5], 1.5),
        ]);
        let f = Zp::default();
        let p = reduce(&fl, f);
        let last = fl.num_ranks() - 1;
        assert_eq!(p.basis_at(last).len(), 2);
        let left = Chain::from_terms(
            f,
            [
                (Simplex::edge(0, 1), 1),
                (Simplex::edge(1, 4), 1),
                (Simplex::edge(3, 4), -1),
                (Simplex::edge(0, 3), -1),
            ],
        );
        let right = Chain::from_terms(
            f,
            [
                (Simplex::edge(1, 2), 1),
                (Simplex::edge(2, 5), 1),
                (Simplex::edge(4, 5), -1),
                (Simplex::edge(1, 4), -1),
            ],
        );
        let cl = p.class_coordinates(&fl, &left, last).unwrap();
        let cr = p.class_coordinates(&fl, &right, last).unwrap();
        let combo = left.scale(2).add(&right.scale(3));
        let cc = p.class_coordinates(&fl, &combo, last).unwrap();
        for k in 0..2 {
            assert_eq!(cc[k], f.add(f.mul(2, cl[k]), f.mul(3, cr[k])));
        }
        assert_ne!(cl, cr);
    }

    #[test]
    fn image_rank_counts_covering_intervals() {
        let fl = hollow_then_filled();
        let p = reduce(&fl, Zp::default());
        let d = p.diagram();
        let born = fl.rank_of(&Simplex::edge(0, 2)).unwrap();
        assert_eq!(d.image_rank(1, born, born), 1);
        assert_eq!(d.image_rank(1, 0, 0), 0);
        assert_eq!(d.image_rank(1, born, born + 1), 0);
    }
}
