use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dense::{invariant_factors, IntMatrix};

/// Sparse integer matrix stored by columns; each column is sorted by row
/// index and holds no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, BigInt::one())]).collect(),
        }
    }

    /// Duplicate positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of range {rows}x{cols}");
            if v.is_zero() {
                continue;
            }
            *acc[c].entry(r).or_insert_with(BigInt::zero) += v;
        }
        let columns = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(m: &IntMatrix) -> Self {
        let mut t = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m[(r, c)].is_zero() {
                    t.push((r, c, m[(r, c)].clone()));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), t)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m[(*r, c)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v.clone())))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_triplets(self.rows, self.cols, self.triplets().map(|(r, c, v)| (r, c, v * k)))
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn add(&self, other: &SparseMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().chain(other.triplets()).map(|(r, c, v)| (r, c, v.clone())),
        )
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in sparse product");
        let mut columns = Vec::with_capacity(other.cols);
        for ocol in &other.columns {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (k, b) in ocol {
                for (r, a) in &self.columns[*k] {
                    *acc.entry(*r).or_insert_with(BigInt::zero) += a * b;
                }
            }
            columns.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![BigInt::zero(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            if v[c].is_zero() {
                continue;
            }
            for (r, a) in col {
                out[*r] += a * &v[c];
            }
        }
        out
    }

    /// Place `block` with its top-left corner at `(row0, col0)` in a fresh
    /// triplet list (helper for block assembly).
    pub fn shifted_triplets(&self, row0: usize, col0: usize) -> impl Iterator<Item = (usize, usize, BigInt)> + '_ {
        self.triplets().map(move |(r, c, v)| (r + row0, c + col0, v.clone()))
    }

    /// Rank and invariant factors (see [`elimination_invariants`]).
    pub fn invariants(&self) -> Invariants {
        elimination_invariants(self, true)
    }

    pub fn rank(&self) -> usize {
        elimination_invariants(self, false).rank
    }
}

/// Rank of an integer matrix and, when requested, its nonunit invariant
/// factors (the torsion the matrix contributes as a boundary map).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Sparse elimination with unit pivots followed by a dense Smith reduction
/// of the remaining core. Unit pivots preserve the Smith form, so the result
/// is exact.
pub fn elimination_invariants(m: &SparseMatrix, want_torsion: bool) -> Invariants {
    let nrows = m.rows;
    let ncols = m.cols;
    // row-major copy
    let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); nrows];
    for (c, col) in m.columns.iter().enumerate() {
        for (r, v) in col {
            rows[*r].push((c, v.clone()));
        }
    }
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, _) in row {
            col_rows[*c].push(r);
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut rank = 0usize;

    let mut order: Vec<usize> = (0..nrows).filter(|&r| !rows[r].is_empty()).collect();
    order.sort_by_key(|&r| rows[r].len());
    loop {
        let mut progress = false;
        for &r in &order {
            if !row_alive[r] || rows[r].is_empty() {
                continue;
            }
            // unit entry with the sparsest column
            let mut pivot: Option<(usize, usize)> = None;
            for (k, (c, v)) in rows[r].iter().enumerate() {
                if v.abs().is_one() {
                    let cnt = col_rows[*c].len();
                    if pivot.map_or(true, |(_, best)| cnt < best) {
                        pivot = Some((k, cnt));
                    }
                }
            }
            let Some((k, _)) = pivot else { continue };
            let (pc, pv) = rows[r][k].clone();
            row_alive[r] = false;
            rank += 1;
            let prow = std::mem::take(&mut rows[r]);
            let targets = std::mem::take(&mut col_rows[pc]);
            for i in targets {
                if i == r || !row_alive[i] {
                    continue;
                }
                let Ok(pos) = rows[i].binary_search_by_key(&pc, |(c, _)| *c) else {
                    continue;
                };
                // row_i -= (a_ic / pv) * prow ; pv = ±1
                let factor = &rows[i][pos].1 * &pv;
                let merged = merge_sub(&rows[i], &prow, &factor);
                for (c, _) in &merged {
                    if rows[i].binary_search_by_key(c, |(cc, _)| *cc).is_err() {
                        col_rows[*c].push(i);
                    }
                }
                rows[i] = merged;
            }
            progress = true;
        }
        if !progress {
            break;
        }
    }

    // dense core from the surviving rows
    let live: Vec<usize> = (0..nrows).filter(|&r| row_alive[r] && !rows[r].is_empty()).collect();
    if live.is_empty() {
        return Invariants { rank, torsion: Vec::new() };
    }
    let mut cols_used: Vec<usize> = live.iter().flat_map(|&r| rows[r].iter().map(|(c, _)| *c)).collect();
    cols_used.sort_unstable();
    cols_used.dedup();
    let col_index: std::collections::HashMap<usize, usize> =
        cols_used.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut core = IntMatrix::zeros(live.len(), cols_used.len());
    for (i, &r) in live.iter().enumerate() {
        for (c, v) in &rows[r] {
            core[(i, col_index[c])] = v.clone();
        }
    }
    if want_torsion {
        let inv = invariant_factors(&core);
        rank += inv.len();
        let torsion = inv.into_iter().filter(|d| !d.is_one()).collect();
        Invariants { rank, torsion }
    } else {
        rank += dense_rank(&core);
        Invariants { rank, torsion: Vec::new() }
    }
}

fn merge_sub(a: &[(usize, BigInt)], b: &[(usize, BigInt)], factor: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = -(&b[j].1 * factor);
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = &a[i].1 - &b[j].1 * factor;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn dense_rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[(r, c)].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(rank, j)].clone();
                a[(rank, j)] = tmp;
            }
        }
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[(i, j)] * &a[(rank, c)] - &a[(i, c)] * &a[(rank, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, c)] = BigInt::zero();
        }
        prev = a[(rank, c)].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::smith_normal_form;

    #[test]
    fn elimination_matches_dense_snf() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 0], vec![6, 8, 1], vec![0, 0, 3]]);
        let s = SparseMatrix::from_dense(&m);
        let inv = s.invariants();
        let snf = smith_normal_form(&m);
        assert_eq!(inv.rank, snf.rank);
        let tors: Vec<BigInt> = snf.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
        assert_eq!(inv.torsion, tors);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]));
        let b = a.transpose();
        let p = a.mul(&b).to_dense();
        assert_eq!(p, IntMatrix::from_rows(&[vec![5, 2], vec![2, 1]]));
    }
}
