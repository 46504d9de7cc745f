//! Dense matrices over exact rationals.

use super::rat::Rat;
use super::upoly::UPoly;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&self, c: &Rat) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            &self[(i / other.rows, j / other.cols)] * &other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Fraction-free (Bareiss) elimination; returns the rank, the reduced
    /// matrix and whether an odd number of row swaps occurred.
    fn bareiss(&self) -> (usize, QMatrix, bool) {
        let mut m = self.clone();
        let mut prev = Rat::one();
        let mut rank = 0;
        let mut swaps = false;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != rank {
                for j in 0..self.cols {
                    m.data.swap(p * self.cols + j, rank * self.cols + j);
                }
                swaps = !swaps;
            }
            let pivot = m[(rank, col)].clone();
            for r in rank + 1..self.rows {
                let factor = m[(r, col)].clone();
                for j in 0..self.cols {
                    let v = (&pivot * &m[(r, j)] - &factor * &m[(rank, j)]) / &prev;
                    m[(r, j)] = v;
                }
            }
            prev = pivot;
            rank += 1;
        }
        (rank, m, swaps)
    }

    /// Rank by forward elimination that skips rows already zero in the pivot
    /// column, which keeps sparse systems cheap.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            for j in col..self.cols {
                m.data.swap(p * self.cols + j, rank * self.cols + j);
            }
            let inv = m[(rank, col)].recip();
            for r in rank + 1..self.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                for j in col..self.cols {
                    if !m[(rank, j)].is_zero() {
                        let v = &m[(r, j)] - &f * &m[(rank, j)];
                        m[(r, j)] = v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn determinant(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rat::one();
        }
        let (rank, m, swaps) = self.bareiss();
        if rank < self.rows {
            return Rat::zero();
        }
        let d = m[(self.rows - 1, self.cols - 1)].clone();
        if swaps {
            -d
        } else {
            d
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                m.data.swap(p * self.cols + j, r * self.cols + j);
            }
            let inv = m[(r, col)].recip();
            for j in 0..self.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[(i, col)].is_zero() {
                    let f = m[(i, col)].clone();
                    for j in 0..self.cols {
                        let v = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right null space, as columns of the returned matrix.
    pub fn nullspace(&self) -> QMatrix {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = QMatrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis[(f, k)] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                basis[(p, k)] = -m[(r, f)].clone();
            }
        }
        basis
    }

    /// Solves `self · X = rhs` for `X` when a solution exists.
    pub fn solve(&self, rhs: &QMatrix) -> Option<QMatrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        });
        let (m, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = QMatrix::zeros(self.cols, rhs.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for k in 0..rhs.cols {
                x[(p, k)] = m[(r, self.cols + k)].clone();
            }
        }
        Some(x)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Characteristic polynomial `det(z·I − A)` by Faddeev–LeVerrier.
    pub fn charpoly(&self) -> UPoly<Rat> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        // coeffs[k] multiplies z^k; leading coefficient 1.
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = QMatrix::zeros(n, n);
        let id = QMatrix::identity(n);
        for k in 1..=n {
            m = &(self * &m) + &id.scale(&coeffs[n - k + 1]);
            let am = self * &m;
            coeffs[n - k] = -am.trace() / Rat::from_integer((k as i64).into());
        }
        UPoly::new(coeffs)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.scale(&-Rat::one())
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
