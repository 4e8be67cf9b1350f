//! Arithmetic in the prime field Z_p and small dense linear algebra over it.

use serde::{Deserialize, Serialize};

/// Largest admissible prime (exclusive).
pub const MAX_PRIME: u32 = 1 << 15;

pub const DEFAULT_PRIME: u32 = 1009;

/// The field Z_p for an odd prime `p < 2^15`. Elements are `u32` values in
/// `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zp {
    p: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Default for Zp {
    fn default() -> Self {
        Zp { p: DEFAULT_PRIME }
    }
}

impl Zp {
    pub fn new(p: u32) -> Result<Self, String> {
        if !(3..MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(format!("{p} is not an odd prime below {MAX_PRIME}"));
        }
        Ok(Zp { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Representative in `(-p/2, p/2]`, handy for printing.
    pub fn signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// Row-major dense matrix over Z_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// `self - t * other`
    pub fn sub_scaled(&self, f: Zp, t: u32, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data =
            self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, f.mul(t, b))).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, f: Zp, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: Zp) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&i| self.get(i, col) != 0) else {
                continue;
            };
            if piv != row {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, row * self.cols + j);
                }
            }
            let inv = f.inv(self.get(row, col));
            for j in col..self.cols {
                let v = self.get(row, j);
                self.set(row, j, f.mul(v, inv));
            }
            for i in 0..self.rows {
                let factor = self.get(i, col);
                if i == row || factor == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(row, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: Zp) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right null space, one vector of length `cols` each.
    pub fn nullspace(&self, f: Zp) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }
}

/// Incremental Gaussian elimination on vectors of a fixed length. Each
/// stored pivot remembers which inserted vectors it is a combination of, so
/// that reduced vectors can be expressed in terms of the inserted ones.
#[derive(Clone, Debug)]
pub struct Reducer {
    f: Zp,
    len: usize,
    /// (pivot position, reduced vector normalized to 1 at pivot, combination)
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
    inserted: usize,
    track: bool,
}

impl Reducer {
    pub fn new(f: Zp, len: usize, track: bool) -> Self {
        Reducer { f, len, rows: Vec::new(), inserted: 0, track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored pivots. Returns the residual and the
    /// combination of inserted vectors that was subtracted.
    pub fn reduce(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let f = self.f;
        let mut r = v.to_vec();
        let mut comb = if self.track { vec![0; self.inserted] } else { Vec::new() };
        for (piv, row, rc) in &self.rows {
            let c = r[*piv];
            if c == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
            if self.track {
                for (x, &y) in comb.iter_mut().zip(rc) {
                    if y != 0 {
                        *x = f.add(*x, f.mul(c, y));
                    }
                }
            }
        }
        (r, comb)
    }

    /// Inserts `v`; returns false (and stores nothing) if it is dependent.
    /// Dependent vectors still count as inserted for combination indexing.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.len);
        let f = self.f;
        let (mut r, comb) = self.reduce(v);
        let id = self.inserted;
        self.inserted += 1;
        if self.track {
            for row in &mut self.rows {
                row.2.push(0);
            }
        }
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[piv]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        let mut rc = Vec::new();
        if self.track {
            // r = v - sum comb_k * e_k, normalized
            rc = vec![0; self.inserted];
            for (k, &c) in comb.iter().enumerate() {
                rc[k] = f.neg(f.mul(c, inv));
            }
            rc[id] = inv;
        }
        // keep the stored rows fully reduced at this pivot
        for (_, row, orc) in &mut self.rows {
            let c = row[piv];
            if c == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&r) {
                *x = f.sub(*x, f.mul(c, y));
            }
            if self.track {
                for (x, &y) in orc.iter_mut().zip(&rc) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        self.rows.push((piv, r, rc));
        true
    }

    /// Coefficients `c` with `v = sum c_k * inserted_k`, if `v` lies in the
    /// span.
    pub fn express(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert!(self.track);
        let (r, comb) = self.reduce(v);
        r.iter().all(|&x| x == 0).then_some(comb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_basics() {
        let f = Zp::new(1009).unwrap();
        assert_eq!(f.add(1000, 20), 11);
        assert_eq!(f.sub(3, 5), 1007);
        assert_eq!(f.mul(f.inv(7), 7), 1);
        assert_eq!(f.from_i64(-1), 1008);
        assert_eq!(f.signed(1008), -1);
        assert!(Zp::new(1000).is_err());
        assert!(Zp::new(2).is_err());
        assert!(Zp::new(32771).is_err());
        assert!(Zp::new(32749).is_ok());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = Zp::new(5).unwrap();
        let m = Mat::from_rows(&[vec![1, 2, 3, 4], vec![2, 4, 1, 3]]);
        let ns = m.nullspace(f);
        assert_eq!(ns.len(), 4 - m.rank(f));
        for v in &ns {
            assert!(m.mul_vec(f, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn reducer_expresses_combinations() {
        let f = Zp::new(7).unwrap();
        let mut r = Reducer::new(f, 3, true);
        assert!(r.insert(&[1, 2, 0]));
        assert!(r.insert(&[0, 1, 1]));
        assert!(!r.insert(&[1, 3, 1]));
        // 2*(1,2,0) + 3*(0,1,1)
        let c = r.express(&[2, 0, 3]).unwrap();
        assert_eq!((c[0], c[1]), (2, 3));
        assert!(r.express(&[0, 0, 1]).is_none());
    }
}
