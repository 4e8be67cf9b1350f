use std::collections::HashMap;

use serde::Serialize;

use super::{delaunay_triangulation, PointSet, Simplex};
use crate::error::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiltrationEntry {
    pub simplex: Simplex,
    pub radius: f64,
    /// index of the critical value at which the simplex enters
    pub rank: usize,
}

/// Delaunay triangulation ordered by Čech radius, then dimension, then
/// vertex order. Rank `i` is the sublevel complex at the `i`-th distinct
/// radius.
#[derive(Clone, Debug)]
pub struct Filtration {
    entries: Vec<FiltrationEntry>,
    critical_values: Vec<f64>,
    rank_end: Vec<usize>,
    index_of: HashMap<Simplex, usize>,
}

impl Filtration {
    /// Builds a filtration from simplices with given radii. Faces must be
    /// present and must not have larger radii than their cofaces.
    pub fn from_simplices(mut items: Vec<(Simplex, f64)>) -> Self {
        items.sort_by(|a, b| {
            a.1.total_cmp(&b.1).then(a.0.dim().cmp(&b.0.dim())).then(a.0.cmp(&b.0))
        });
        let mut entries = Vec::with_capacity(items.len());
        let mut critical_values: Vec<f64> = Vec::new();
        let mut rank_end = Vec::new();
        for (i, &(simplex, radius)) in items.iter().enumerate() {
            if critical_values.last() != Some(&radius) {
                if !critical_values.is_empty() {
                    rank_end.push(i);
                }
                critical_values.push(radius);
            }
            entries.push(FiltrationEntry { simplex, radius, rank: critical_values.len() - 1 });
        }
        rank_end.push(entries.len());
        let index_of = entries.iter().enumerate().map(|(i, e)| (e.simplex, i)).collect();
        let f = Filtration { entries, critical_values, rank_end, index_of };
        debug_assert!(f.is_valid());
        f
    }

    fn is_valid(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, e)| {
            e.simplex.dim() == 0
                || (0..=e.simplex.dim()).all(|k| {
                    self.index_of(&e.simplex.facet(k))
                        .is_some_and(|j| j < i && self.entries[j].radius <= e.radius)
                })
        })
    }

    pub fn entries(&self) -> &[FiltrationEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn critical_values(&self) -> &[f64] {
        &self.critical_values
    }

    pub fn num_ranks(&self) -> usize {
        self.critical_values.len()
    }

    /// One past the index of the last simplex of rank `rank`.
    pub fn rank_end(&self, rank: usize) -> usize {
        self.rank_end[rank]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index_of.get(s).copied()
    }

    pub fn rank_of(&self, s: &Simplex) -> Option<usize> {
        self.index_of(s).map(|i| self.entries[i].rank)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of.contains_key(s)
    }

    /// Boundary of entry `i` as (entry index, sign) pairs.
    pub fn boundary(&self, i: usize) -> Vec<(usize, i8)> {
        let s = self.entries[i].simplex;
        if s.dim() == 0 {
            return Vec::new();
        }
        (0..=s.dim())
            .map(|k| {
                let j = self.index_of[&s.facet(k)];
                (j, if k % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// Rank `i` such that `r` lies in `[r_i, r_{i+1})`, or `None` if `r` is
    /// below the first critical value.
    pub fn rank_at(&self, r: f64) -> Option<usize> {
        let k = self.critical_values.partition_point(|&c| c <= r);
        k.checked_sub(1)
    }
}

/// Delaunay-Čech filtration of a point set.
pub fn build_filtration(space: &PointSet) -> Result<Filtration, GeometryError> {
    let simplices = delaunay_triangulation(space)?;
    let mut radius: HashMap<Simplex, f64> = HashMap::with_capacity(simplices.len());
    let mut items = Vec::with_capacity(simplices.len());
    // simplices come ordered by dimension, so faces are known first
    for s in simplices {
        let mut r = if s.dim() == 0 { 0.0 } else { space.cech_radius(&s)? };
        if s.dim() > 0 {
            for k in 0..=s.dim() {
                r = r.max(radius[&s.facet(k)]);
            }
        }
        radius.insert(s, r);
        items.push((s, r));
    }
    Ok(Filtration::from_simplices(items))
}
