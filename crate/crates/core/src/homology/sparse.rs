//! Sparse integer elimination for large boundary matrices.
//!
//! Unit pivots are eliminated greedily (shortest column first, shortest row
//! within it). These are unimodular steps, so the invariant factors of the
//! input are the eliminated ones followed by the invariant factors of the
//! dense residual block, which goes through the dense Smith reduction.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use super::matrix::IntMatrix;
use super::snf::invariant_factors;
use crate::error::{Error, Result};

/// Sparse matrix stored by rows; entries sorted by column.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols);
        let row = &mut self.entries[r];
        match row.binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(i) => {
                row[i].1 += v;
                if row[i].1 == 0 {
                    row.remove(i);
                }
            }
            Err(i) => {
                if v != 0 {
                    row.insert(i, (c as u32, v));
                }
            }
        }
    }

    pub fn row(&self, r: usize) -> &[(u32, i64)] {
        &self.entries[r]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                m.set(r, c as usize, v);
            }
        }
        m
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let mut s = SparseMatrix::new(m.rows(), m.cols());
        for (r, c, v) in m.triplets() {
            s.entries[r].push((c as u32, v));
        }
        s
    }

    /// Keeps only the listed rows (in the given order).
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        SparseMatrix { rows: rows.len(), cols: self.cols, entries: rows.iter().map(|&r| self.entries[r].clone()).collect() }
    }

    /// Appends `v` as an extra column.
    pub fn with_column(&self, v: &[i64]) -> Self {
        assert_eq!(v.len(), self.rows);
        let mut s = self.clone();
        s.cols += 1;
        for (r, &x) in v.iter().enumerate() {
            if x != 0 {
                s.entries[r].push((self.cols as u32, x));
            }
        }
        s
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        self.entries.iter().map(|row| row.iter().map(|&(c, x)| x * v[c as usize]).sum()).collect()
    }
}

/// Result of sparse elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    /// Rank over the rationals.
    pub rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
}

fn merge_sub(target: &[(u32, i64)], pivot: &[(u32, i64)], q: i64) -> Option<Vec<(u32, i64)>> {
    // target - q * pivot
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|e| e.0);
        let pj = pivot.get(j).map(|e| e.0);
        match (ti, pj) {
            (Some(a), Some(b)) if a == b => {
                let v = target[i].1.checked_sub(q.checked_mul(pivot[j].1)?)?;
                if v != 0 {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push(target[i]);
                i += 1;
            }
            (Some(_), None) => {
                out.push(target[i]);
                i += 1;
            }
            _ => {
                let v = q.checked_mul(pivot[j].1)?.checked_neg()?;
                out.push((pivot[j].0, v));
                j += 1;
            }
        }
    }
    Some(out)
}

/// Exact rank and torsion coefficients of an integer matrix.
pub fn eliminate(m: &SparseMatrix) -> Result<Elimination> {
    let mut rows: Vec<Option<Vec<(u32, i64)>>> = m.entries.iter().map(|r| Some(r.clone())).collect();
    let mut col_rows: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); m.cols];
    for (r, row) in m.entries.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c as usize].insert(r as u32);
        }
    }
    let mut col_alive = vec![true; m.cols];
    let mut rank = 0usize;
    // min-heap of (count, column); stale entries are skipped on pop
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
        (0..m.cols).filter(|&c| !col_rows[c].is_empty()).map(|c| Reverse((col_rows[c].len(), c as u32))).collect();
    let mut deferred = vec![false; m.cols];
    while let Some(Reverse((n, c))) = heap.pop() {
        let c = c as usize;
        if !col_alive[c] || deferred[c] || col_rows[c].len() != n || n == 0 {
            continue;
        }
        let mut pivot_row: Option<(u32, usize)> = None;
        for &r in &col_rows[c] {
            let row = rows[r as usize].as_ref().expect("live row");
            let v = row.iter().find(|e| e.0 == c as u32).expect("indexed entry").1;
            if v.abs() == 1 && pivot_row.is_none_or(|(_, len)| row.len() < len) {
                pivot_row = Some((r, row.len()));
            }
        }
        let Some((pr, _)) = pivot_row else {
            deferred[c] = true;
            continue;
        };
        let prow = rows[pr as usize].take().expect("live pivot row");
        let pv = prow.iter().find(|e| e.0 == c as u32).expect("pivot entry").1;
        for &(cc, _) in &prow {
            col_rows[cc as usize].remove(&pr);
            if cc as usize != c && col_alive[cc as usize] {
                heap.push(Reverse((col_rows[cc as usize].len(), cc)));
            }
        }
        let others: Vec<u32> = col_rows[c].iter().copied().collect();
        for r in others {
            let row = rows[r as usize].take().expect("live row");
            let v = row.iter().find(|e| e.0 == c as u32).expect("entry").1;
            let q = v * pv; // pv = +-1 so v / pv = v * pv
            let new = merge_sub(&row, &prow, q).ok_or_else(|| Error::Overflow("sparse elimination".into()))?;
            for &(cc, _) in &row {
                col_rows[cc as usize].remove(&r);
            }
            for &(cc, _) in &new {
                col_rows[cc as usize].insert(r);
            }
            for &(cc, _) in row.iter().chain(new.iter()) {
                let cc = cc as usize;
                if col_alive[cc] && cc != c {
                    deferred[cc] = false;
                    heap.push(Reverse((col_rows[cc].len(), cc as u32)));
                }
            }
            rows[r as usize] = Some(new);
        }
        col_alive[c] = false;
        col_rows[c].clear();
        rank += 1;
    }
    // dense residual
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| rows[r].as_ref().is_some_and(|x| !x.is_empty())).collect();
    let mut col_index: HashMap<u32, usize> = HashMap::new();
    for &r in &live_rows {
        for &(c, _) in rows[r].as_ref().unwrap() {
            let next = col_index.len();
            col_index.entry(c).or_insert(next);
        }
    }
    let mut torsion = Vec::new();
    if !live_rows.is_empty() {
        let mut dense = IntMatrix::zeros(live_rows.len(), col_index.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for &(c, v) in rows[r].as_ref().unwrap() {
                dense.set(i, col_index[&c], v);
            }
        }
        for d in invariant_factors(&dense) {
            rank += 1;
            if !d.is_one() {
                torsion.push(d);
            }
        }
    }
    Ok(Elimination { rank, torsion })
}

pub fn rank(m: &SparseMatrix) -> Result<usize> {
    Ok(eliminate(m)?.rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::snf::smith_normal_form;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_dense_snf() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let (r, c) = (rng.gen_range(1..12), rng.gen_range(1..12));
            let mut m = IntMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    if rng.gen_bool(0.3) {
                        m.set(i, j, rng.gen_range(-3..=3));
                    }
                }
            }
            let e = eliminate(&SparseMatrix::from_dense(&m)).unwrap();
            let f = smith_normal_form(&m);
            let dense_torsion: Vec<BigInt> = f.diagonal().into_iter().filter(|d| !d.is_one()).collect();
            assert_eq!(e.rank, f.rank);
            assert_eq!(e.torsion, dense_torsion);
        }
    }

    #[test]
    fn add_cancels_entries() {
        let mut s = SparseMatrix::new(2, 2);
        s.add(0, 1, 3);
        s.add(0, 1, -3);
        assert_eq!(s.nnz(), 0);
    }
}
