//! Dense rational matrices with exact inverse, rank, determinant, and an
//! incremental row-space tracker that produces dependency certificates.

use num_traits::{One, Zero};

use super::{ExactAlgError, Rat};

/// Rectangular matrix over the rationals; dimensions fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>, // row-major
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        assert!(r > 0);
        let c = rows[0].len();
        assert!(c > 0 && rows.iter().all(|row| row.len() == c));
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| super::rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = QMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + &(a * rhs.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Exact inverse via Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<QMatrix, ExactAlgError> {
        if self.rows != self.cols {
            return Err(ExactAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(ExactAlgError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, av);
                    let iv = inv.get(r, j) - &(&factor * inv.get(col, j));
                    inv.set(r, j, iv);
                }
            }
        }
        Ok(inv)
    }

    /// Exact determinant via elimination.
    pub fn determinant(&self) -> Result<Rat, ExactAlgError> {
        if self.rows != self.cols {
            return Err(ExactAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !a.get(r, col).is_zero()) {
                Some(p) => p,
                None => return Ok(Rat::zero()),
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col) / &p;
                for j in col..n {
                    let v = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Solve `self * x = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &[Rat]) -> Result<Vec<Rat>, ExactAlgError> {
        let inv = self.inverse()?;
        assert_eq!(rhs.len(), self.rows);
        Ok((0..inv.rows)
            .map(|i| {
                (0..inv.cols)
                    .map(|j| inv.get(i, j) * &rhs[j])
                    .fold(Rat::zero(), |acc, v| acc + v)
            })
            .collect())
    }

    /// Rank over the rationals, exact.
    pub fn rank(&self) -> usize {
        let mut space = RowSpace::new(self.cols);
        for r in 0..self.rows {
            space.insert(self.row(r));
        }
        space.rank()
    }
}

/// Outcome of inserting a row into a [`RowSpace`].
#[derive(Debug, Clone, PartialEq)]
pub enum RowInsertion {
    /// The row was independent of everything inserted before it.
    Independent,
    /// The row equals the given combination of previously inserted rows
    /// (pairs of original row index and coefficient).
    DependentOn(Vec<(usize, Rat)>),
}

/// Incremental row-space tracker. Rows are inserted one at a time; dependent
/// rows come back with the exact linear combination of earlier rows.
pub struct RowSpace {
    cols: usize,
    inserted: usize,
    basis: Vec<BasisRow>,
}

/// A reduced basis vector with its pivot column and its expression as a
/// combination of original rows.
struct BasisRow {
    vector: Vec<Rat>,
    pivot: usize,
    expr: Vec<(usize, Rat)>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace {
            cols,
            inserted: 0,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn insert(&mut self, row: Vec<Rat>) -> RowInsertion {
        assert_eq!(row.len(), self.cols);
        let index = self.inserted;
        self.inserted += 1;
        let mut residual = row;
        let mut expr: Vec<(usize, Rat)> = vec![(index, Rat::one())];
        for basis_row in &self.basis {
            if residual[basis_row.pivot].is_zero() {
                continue;
            }
            let c = &residual[basis_row.pivot] / &basis_row.vector[basis_row.pivot];
            for (dst, src) in residual.iter_mut().zip(&basis_row.vector) {
                if !src.is_zero() {
                    *dst = &*dst - &(&c * src);
                }
            }
            for (i, coef) in &basis_row.expr {
                add_expr(&mut expr, *i, -(&c * coef));
            }
        }
        match residual.iter().position(|v| !v.is_zero()) {
            None => {
                // residual = sum expr_i * row_i = 0 and expr carries the new
                // row with coefficient 1, so row = -sum of the rest
                let combo = expr
                    .into_iter()
                    .filter(|(i, c)| *i != index && !c.is_zero())
                    .map(|(i, c)| (i, -c))
                    .collect();
                RowInsertion::DependentOn(combo)
            }
            Some(pivot) => {
                // keep older basis vectors reduced against the new pivot
                for basis_row in &mut self.basis {
                    if basis_row.vector[pivot].is_zero() {
                        continue;
                    }
                    let c = &basis_row.vector[pivot] / &residual[pivot];
                    for (dst, src) in basis_row.vector.iter_mut().zip(&residual) {
                        if !src.is_zero() {
                            *dst = &*dst - &(&c * src);
                        }
                    }
                    for (i, coef) in &expr {
                        add_expr(&mut basis_row.expr, *i, -(&c * coef));
                    }
                }
                self.basis.push(BasisRow {
                    vector: residual,
                    pivot,
                    expr,
                });
                self.basis.sort_by_key(|b| b.pivot);
                RowInsertion::Independent
            }
        }
    }
}

fn add_expr(expr: &mut Vec<(usize, Rat)>, idx: usize, delta: Rat) {
    if delta.is_zero() {
        return;
    }
    if let Some(entry) = expr.iter_mut().find(|(i, _)| *i == idx) {
        entry.1 = &entry.1 + &delta;
        if entry.1.is_zero() {
            expr.retain(|(_, c)| !c.is_zero());
        }
        return;
    }
    expr.push((idx, delta));
    expr.sort_by_key(|(i, _)| *i);
}
