use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix over the integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j].clone().into())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * k;
            if !v.is_zero() {
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * k;
            if !v.is_zero() {
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }

    /// Determinant by fraction-free elimination; square matrices only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[(r, k)].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * prev
    }
}

/// Result of a Smith normal form computation with unimodular transforms,
/// `left * input * right == diagonal`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries in order; each divides the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.diagonal[(i, i)].clone()).collect()
    }
}

/// Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = &d[(r, c)];
                if v.is_zero() {
                    continue;
                }
                if best.map_or(true, |(br, bc)| v.abs() < d[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        d.swap_rows(t, pr);
        left.swap_rows(t, pr);
        d.swap_cols(t, pc);
        right.swap_cols(t, pc);
        loop {
            let mut changed = false;
            for r in t + 1..rows {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = d[(r, t)].div_floor(&d[(t, t)]);
                let nq = -q;
                d.add_row(r, t, &nq);
                left.add_row(r, t, &nq);
                if !d[(r, t)].is_zero() {
                    d.swap_rows(t, r);
                    left.swap_rows(t, r);
                    changed = true;
                }
            }
            for c in t + 1..cols {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = d[(t, c)].div_floor(&d[(t, t)]);
                let nq = -q;
                d.add_col(c, t, &nq);
                right.add_col(c, t, &nq);
                if !d[(t, c)].is_zero() {
                    d.swap_cols(t, c);
                    right.swap_cols(t, c);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block
            let mut fix = None;
            'outer: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !d[(r, c)].is_multiple_of(&d[(t, t)]) {
                        fix = Some(r);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(r) => {
                    let one = BigInt::one();
                    d.add_row(t, r, &one);
                    left.add_row(t, r, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        diagonal: d,
        left,
        right,
        rank: t,
    }
}

/// Invariant factors only (no transforms); cheaper than [`smith_normal_form`].
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = &d[(r, c)];
                if !v.is_zero() && best.map_or(true, |(br, bc)| v.abs() < d[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        d.swap_rows(t, pr);
        d.swap_cols(t, pc);
        loop {
            let mut changed = false;
            for r in t + 1..rows {
                if d[(r, t)].is_zero() {
                    continue;
                }
                let q = -d[(r, t)].div_floor(&d[(t, t)]);
                d.add_row(r, t, &q);
                if !d[(r, t)].is_zero() {
                    d.swap_rows(t, r);
                    changed = true;
                }
            }
            for c in t + 1..cols {
                if d[(t, c)].is_zero() {
                    continue;
                }
                let q = -d[(t, c)].div_floor(&d[(t, t)]);
                d.add_col(c, t, &q);
                if !d[(t, c)].is_zero() {
                    d.swap_cols(t, c);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            let mut fix = None;
            'outer: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !d[(r, c)].is_multiple_of(&d[(t, t)]) {
                        fix = Some(r);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(r) => d.add_row(t, r, &BigInt::one()),
                None => break,
            }
        }
        out.push(d[(t, t)].abs());
        t += 1;
    }
    out
}

/// Row-style Hermite normal form of the lattice spanned by `rows`:
/// echelon form with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(rows: &[Vec<BigInt>], width: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..width {
        // combine all rows with nonzero entry in `col` into one by gcd steps
        let mut idx: Vec<usize> = (0..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
        if idx.is_empty() {
            continue;
        }
        while idx.len() > 1 {
            idx.sort_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let p = idx[0];
            for &i in &idx[1..] {
                let q = m[i][col].div_floor(&m[p][col]);
                let (prow, irow) = if p < i {
                    let (a, b) = m.split_at_mut(i);
                    (&a[p], &mut b[0])
                } else {
                    let (a, b) = m.split_at_mut(p);
                    (&b[0], &mut a[i])
                };
                for c in 0..width {
                    let v = &prow[c] * &q;
                    irow[c] -= v;
                }
            }
            idx.retain(|&i| !m[i][col].is_zero());
        }
        let p = idx[0];
        let mut row = m.swap_remove(p);
        if row[col].is_negative() {
            for v in row.iter_mut() {
                *v = -std::mem::take(v);
            }
        }
        out.push(row);
        pivots.push(col);
    }
    // reduce above pivots
    for k in 0..out.len() {
        let col = pivots[k];
        let piv = out[k][col].clone();
        for j in 0..k {
            let q = out[j][col].div_floor(&piv);
            if q.is_zero() {
                continue;
            }
            let (a, b) = out.split_at_mut(k);
            for c in 0..width {
                let v = &b[0][c] * &q;
                a[j][c] -= v;
            }
        }
    }
    out
}

/// A ℤ-basis of the integer kernel `{x : m x = 0}`, in Hermite normal form.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let basis: Vec<Vec<BigInt>> = (snf.rank..m.cols).map(|c| snf.right.column(c)).collect();
    hermite_rows(&basis, m.cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_of_small_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&id).diagonal, id);
        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert_eq!(s.rank, 0);
        assert!(s.diagonal.is_zero());
        // gcd of entries is 2 and |det| = 8, hence diag(2, 4)
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors(), vec![bi(2), bi(4)]);
        assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal);
        assert_eq!(invariant_factors(&m), vec![bi(2), bi(4)]);
    }

    #[test]
    fn kernel_is_hermite_and_annihilated() {
        let m = IntMatrix::from_rows(&[vec![1, 1, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        // pivots positive
        assert!(k[0].iter().find(|x| !x.is_zero()).unwrap().is_positive());
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(m.determinant(), bi(18));
    }
}
