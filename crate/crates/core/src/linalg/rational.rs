use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense rational matrix, row-major `Vec` of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![vec![BigRational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigRational::one();
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        QMatrix {
            rows: rows.len(),
            cols,
            data: rows
                .iter()
                .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        self.data.iter().map(|r| r[c].clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> QMatrix {
        let mut m = QMatrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for r in 0..rows {
                m.data[r][c] = col[r].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.data[i][c].is_zero()) else {
                continue;
            };
            a.data.swap(r, p);
            let inv = a.data[r][c].recip();
            for v in a.data[r].iter_mut() {
                *v *= &inv;
            }
            for i in 0..a.rows {
                if i != r && !a.data[i][c].is_zero() {
                    let f = a.data[i][c].clone();
                    let (top, bottom) = if i < r {
                        let (x, y) = a.data.split_at_mut(r);
                        (&mut x[i], &y[0])
                    } else {
                        let (x, y) = a.data.split_at_mut(i);
                        (&mut y[0], &x[r])
                    };
                    for j in 0..a.cols {
                        if !bottom[j].is_zero() {
                            top[j] -= &f * &bottom[j];
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the column space (a subset of the columns).
    pub fn column_basis(&self) -> Vec<Vec<BigRational>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    /// Basis of the null space `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![BigRational::zero(); self.cols];
                x[f] = BigRational::one();
                for (row, &c) in pivots.iter().enumerate() {
                    x[c] = -red.data[row][f].clone();
                }
                x
            })
            .collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c][r] = self.data[r][c].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Coordinates of `v` in the basis given by the columns of `self`
    /// (assumed linearly independent); `None` if `v` is not in their span.
    pub fn solve_in_basis(&self, v: &[BigRational]) -> Option<Vec<BigRational>> {
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r][c] = self.data[r][c].clone();
            }
            aug.data[r][self.cols] = v[r].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = red.data[row][self.cols].clone();
        }
        Some(x)
    }
}
