//! Dense matrices over a prime field with Gauss-Jordan elimination.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::finite_field::PrimeField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("operands use different base fields (F_{left} vs F_{right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("coordinate {index} out of range 1..={ambient}")]
    CoordinateOutOfRange { index: usize, ambient: usize },
    #[error("entry {value} is not an element of F_{q}")]
    EntryOutOfRange { value: u32, q: u32 },
    #[error("rows have inconsistent lengths")]
    RaggedRows,
    #[error("requested dimension {dim} exceeds {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("dump parse error on line {line}: {message}")]
    Dump { line: usize, message: String },
}

/// A `rows × cols` matrix over `F_q`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFq {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixFq {}x{} over F_{}", self.rows, self.cols, self.field.order())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatrixFq {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatrixFq {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows, all of which must have length `cols`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::RaggedRows);
            }
            if let Some(&value) = row.iter().find(|&&v| !field.contains(v)) {
                return Err(LinalgError::EntryOutOfRange {
                    value,
                    q: field.order(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(MatrixFq {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Parses rows written as digit strings, e.g. `["1100", "0110"]`.
    /// Only meaningful for `q ≤ 10`.
    pub fn from_digit_rows(field: PrimeField, rows: &[&str]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let parsed: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.chars().map(|c| c.to_digit(10).unwrap_or(u32::MAX)).collect())
            .collect();
        Self::from_rows(field, cols, &parsed)
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let q = field.order();
        MatrixFq {
            field,
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    /// Uniform random matrix conditioned on full row rank (rejection sampling).
    ///
    /// # Panics
    ///
    /// Panics if `rows > cols`.
    pub fn random_full_row_rank<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        assert!(rows <= cols, "cannot have full row rank with {rows} > {cols}");
        loop {
            let m = Self::random(field, rows, cols, rng);
            if m.rank() == rows {
                return m;
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_field(&self, other: &Self) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LinalgError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let f = self.field;
        Ok(MatrixFq {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other)?;
        let f = self.field;
        Ok(MatrixFq {
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = f.add(out.get(i, j), f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(MatrixFq {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        })
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFq {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        MatrixFq {
            field: self.field,
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Reduces `self` to reduced row echelon form in place, visiting columns
    /// in the given order. Returns the pivot columns; zero rows end up at the
    /// bottom, so the first `pivots.len()` rows are the nonzero ones.
    pub fn rref_in_order(&mut self, column_order: &[usize]) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for &c in column_order {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(lead, p);
            let inv = f.inv(self.get(lead, c)).expect("pivot is nonzero");
            if inv != 1 {
                for v in self.row_mut(lead) {
                    *v = f.mul(*v, inv);
                }
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                let cols = self.cols;
                let (pivot_row, target) = if r < lead {
                    let (a, b) = self.data.split_at_mut(lead * cols);
                    (&b[..cols], &mut a[r * cols..(r + 1) * cols])
                } else {
                    let (a, b) = self.data.split_at_mut(r * cols);
                    (&a[lead * cols..(lead + 1) * cols], &mut b[..cols])
                };
                for (t, &pv) in target.iter_mut().zip(pivot_row) {
                    if pv != 0 {
                        *t = f.sub(*t, f.mul(factor, pv));
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    /// Reduced row echelon form in place with natural column order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_in_order(&order)
    }

    /// RREF with the zero rows removed, plus the pivot columns.
    pub fn rref(&self) -> (MatrixFq, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        m.truncate_rows(pivots.len());
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis (as rows) of the right null space `{x : self · x = 0}`.
    pub fn kernel(&self) -> MatrixFq {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, 1);
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(i, pc, f.neg(r.get(pr, fc)));
            }
        }
        out
    }

    pub(crate) fn truncate_rows(&mut self, rows: usize) {
        self.rows = rows.min(self.rows);
        self.data.truncate(self.rows * self.cols);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (x, y) = self.data.split_at_mut(hi * cols);
        x[lo * cols..(lo + 1) * cols].swap_with_slice(&mut y[..cols]);
    }
}

/// Rank distance `rank(X - Y)`.
pub fn rank_distance(x: &MatrixFq, y: &MatrixFq) -> Result<usize, LinalgError> {
    Ok(x.sub(y)?.rank())
}
