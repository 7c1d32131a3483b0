//! Exact integer matrices with Smith normal form and rank over the
//! rationals, via fraction-free sparse elimination on arbitrary-precision
//! integers.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// A sparse integer matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntegerMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> IntegerMatrix {
        IntegerMatrix {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntegerMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = IntegerMatrix::zero(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.add(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Adds `v` to the (i, j) entry, dropping it when it cancels.
    pub fn add(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.nrows && j < self.ncols, "entry out of bounds");
        if v.is_zero() {
            return;
        }
        match self.entries.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.nrows && j < self.ncols, "entry out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sparse product self * rhs.
    pub fn mul(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.ncols != rhs.nrows {
            return Err(Error::Dimensions(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut rhs_rows: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); rhs.nrows];
        for (&(i, j), v) in &rhs.entries {
            rhs_rows[i].push((j, v));
        }
        let mut out = IntegerMatrix::zero(self.nrows, rhs.ncols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &rhs_rows[k] {
                out.add(i, j, a * b);
            }
        }
        Ok(out)
    }

    /// Rank over the rationals (= number of nonzero invariant factors),
    /// by integer-preserving elimination.
    pub fn rank(&self) -> usize {
        Eliminator::new(self).run(false).len()
    }

    /// The nonzero invariant factors d_1 | d_2 | ..., all positive.
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        Eliminator::new(self).run(true)
    }
}

/// Sparse row-major elimination working over ℤ.
struct Eliminator {
    rows: Vec<HashMap<usize, BigInt>>,
    col_rows: Vec<HashSet<usize>>,
    col_alive: Vec<bool>,
}

impl Eliminator {
    fn new(m: &IntegerMatrix) -> Eliminator {
        let mut rows: Vec<HashMap<usize, BigInt>> = vec![HashMap::new(); m.nrows];
        let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); m.ncols];
        for (&(i, j), v) in &m.entries {
            rows[i].insert(j, v.clone());
            col_rows[j].insert(i);
        }
        Eliminator {
            rows,
            col_rows,
            col_alive: vec![true; m.ncols],
        }
    }

    fn set_entry(&mut self, i: usize, j: usize, v: BigInt) {
        if v.is_zero() {
            if self.rows[i].remove(&j).is_some() {
                self.col_rows[j].remove(&i);
            }
        } else {
            if self.rows[i].insert(j, v).is_none() {
                self.col_rows[j].insert(i);
            }
        }
    }

    /// row_dst -= q * row_src over the alive columns.
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_entries: Vec<(usize, BigInt)> = self.rows[src]
            .iter()
            .map(|(&j, v)| (j, v.clone()))
            .collect();
        for (j, v) in src_entries {
            let cur = self.rows[dst].get(&j).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(dst, j, cur - q * &v);
        }
    }

    /// col_dst -= q * col_src.
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_entries: Vec<(usize, BigInt)> = self.col_rows[src]
            .iter()
            .map(|&i| (i, self.rows[i][&src].clone()))
            .collect();
        for (i, v) in src_entries {
            let cur = self.rows[i].get(&dst).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(i, dst, cur - q * &v);
        }
    }

    /// Picks the pivot in the column of least occupancy, breaking ties by
    /// least absolute value then least row fill.
    fn pick_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None; // (col, nnz, _)
        for (j, alive) in self.col_alive.iter().enumerate() {
            if !alive || self.col_rows[j].is_empty() {
                continue;
            }
            let nnz = self.col_rows[j].len();
            if best.map(|(_, b, _)| nnz < b).unwrap_or(true) {
                best = Some((j, nnz, 0));
            }
        }
        let (col, _, _) = best?;
        let row = self.col_rows[col]
            .iter()
            .copied()
            .min_by_key(|&i| (self.rows[i][&col].abs(), self.rows[i].len(), i))
            .unwrap();
        Some((row, col))
    }

    /// Clears column `c` with integer row operations (Euclid steps on the
    /// least-absolute entry) until a single entry remains; returns its row.
    fn clear_column(&mut self, c: usize) -> usize {
        loop {
            let entries: Vec<usize> = self.col_rows[c].iter().copied().collect();
            debug_assert!(!entries.is_empty());
            let r = entries
                .iter()
                .copied()
                .min_by_key(|&i| (self.rows[i][&c].abs(), i))
                .unwrap();
            if entries.len() == 1 {
                return r;
            }
            let pivot = self.rows[r][&c].clone();
            for i in entries {
                if i == r {
                    continue;
                }
                let q = &self.rows[i][&c].clone() / &pivot;
                self.row_sub(i, r, &q);
            }
            // survivors carry remainders strictly smaller than |pivot|,
            // so the loop terminates
        }
    }

    fn run(&mut self, full_snf: bool) -> Vec<BigInt> {
        let mut diag: Vec<BigInt> = Vec::new();
        while let Some((_, mut c)) = self.pick_pivot() {
            let mut r = self.clear_column(c);
            if full_snf {
                loop {
                    let row_cols: Vec<usize> = self.rows[r].keys().copied().collect();
                    if row_cols.len() == 1 {
                        break;
                    }
                    let j_min = row_cols
                        .iter()
                        .copied()
                        .min_by_key(|&j| (self.rows[r][&j].abs(), j))
                        .unwrap();
                    if j_min != c {
                        // smaller pivot elsewhere in the row: move there and
                        // re-clear its column first
                        c = j_min;
                        r = self.clear_column(c);
                        continue;
                    }
                    let pivot = self.rows[r][&c].clone();
                    for j in row_cols {
                        if j == c {
                            continue;
                        }
                        let q = &self.rows[r][&j].clone() / &pivot;
                        self.col_sub(j, c, &q);
                    }
                    // column c stays exclusive to row r under these column
                    // operations; leftover row remainders are < |pivot|
                }
            }
            let pivot = self.rows[r].remove(&c).expect("pivot entry");
            self.col_rows[c].remove(&r);
            // retire the pivot row and column
            let leftover: Vec<usize> = self.rows[r].keys().copied().collect();
            for j in leftover {
                self.set_entry(r, j, BigInt::zero());
            }
            let col_leftover: Vec<usize> = self.col_rows[c].iter().copied().collect();
            for i in col_leftover {
                self.set_entry(i, c, BigInt::zero());
            }
            self.col_alive[c] = false;
            diag.push(pivot.abs());
        }
        if full_snf {
            normalize_divisibility(&mut diag);
        }
        diag
    }
}

/// Rearranges a diagonal into the invariant-factor chain d_1 | d_2 | ...
/// using gcd/lcm exchanges.
fn normalize_divisibility(diag: &mut [BigInt]) {
    let n = diag.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                if (&diag[j] % &diag[i]).is_zero() {
                    continue;
                }
                let g = diag[i].gcd(&diag[j]);
                let l = (&diag[i] / &g) * &diag[j];
                diag[i] = g;
                diag[j] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    diag.sort();
}
