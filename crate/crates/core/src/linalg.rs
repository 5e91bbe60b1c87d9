//! Dense matrices over GF(2^w).
//!
//! Everything here is exact arithmetic, so pivoting is purely positional: the
//! first nonzero entry in the current column wins.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate Vandermonde node {0:?}")]
    DuplicateNode(FieldElement),
}

/// Row-major dense matrix of field elements.
#[derive(Clone, PartialEq, Eq)]
pub struct GfMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GfMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for v in self.row(r) {
                write!(f, "{:>4x}", v.0)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Outcome of [`GfMatrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<FieldElement>),
    NoSolution,
    /// Consistent, but the columns are dependent.
    Underdetermined,
}

/// Row echelon form together with the operations that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduction {
    /// Upper-triangular (echelon) form with unit pivots. Entries to the
    /// right of a pivot are the elimination coefficients.
    pub reduced: GfMatrix,
    /// Square matrix `T` with `T * input = reduced`.
    pub transform: GfMatrix,
    /// Pivot column of each nonzero row of `reduced`, in order.
    pub pivots: Vec<usize>,
}

impl RowReduction {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl GfMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GfMatrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GfMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// A `1 x n` row of ones.
    pub fn ones_row(n: usize) -> Self {
        GfMatrix {
            rows: 1,
            cols: n,
            data: vec![FieldElement::ONE; n],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(GfMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<FieldElement>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(GfMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        GfMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn transpose(&self) -> GfMatrix {
        GfMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn select_columns(&self, cols: &[usize]) -> GfMatrix {
        GfMatrix::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        GfMatrix::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &GfMatrix) -> Result<GfMatrix, LinalgError> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(GfMatrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn mul(&self, field: &Field, other: &GfMatrix) -> Result<GfMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = GfMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = field.add(out.get(r, c), field.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, field: &Field, x: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(field, self.row(r), x)).collect())
    }

    /// Forward elimination to echelon form with unit pivots.
    ///
    /// Rows are only combined with rows above them, so when no row swap is
    /// needed (e.g. a Vandermonde matrix on distinct nodes) the transform is
    /// lower triangular and row `r` of the result is a combination of input
    /// rows `0..=r`.
    pub fn row_reduce(&self, field: &Field) -> RowReduction {
        let mut a = self.clone();
        let mut t = GfMatrix::identity(self.rows);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(sel) = (prow..self.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(prow, sel);
            t.swap_rows(prow, sel);
            let inv = field.inv(a.get(prow, col)).expect("pivot is nonzero");
            a.scale_row(field, prow, inv);
            t.scale_row(field, prow, inv);
            for r in prow + 1..self.rows {
                let f = a.get(r, col);
                if !f.is_zero() {
                    a.add_scaled_row(field, r, prow, f);
                    t.add_scaled_row(field, r, prow, f);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        RowReduction {
            reduced: a,
            transform: t,
            pivots,
        }
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut a = self.clone();
        a.eliminate_in_place(field)
    }

    /// Solves `self * x = rhs`.
    pub fn solve(&self, field: &Field, rhs: &[FieldElement]) -> Result<Solution, LinalgError> {
        if rhs.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                got: rhs.len(),
            });
        }
        // augmented [A | b]
        let mut aug = GfMatrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                rhs[r]
            }
        });
        let rank = aug.reduce_rref(field);
        let pivots = aug.pivot_columns(rank);
        if pivots.last() == Some(&self.cols) {
            return Ok(Solution::NoSolution);
        }
        if rank < self.cols {
            return Ok(Solution::Underdetermined);
        }
        Ok(Solution::Unique(
            (0..self.cols).map(|r| aug.get(r, self.cols)).collect(),
        ))
    }

    /// Basis of the right null space `{x : self * x = 0}`, one vector per
    /// free column, in increasing order of free column.
    pub fn null_space(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        let mut a = self.clone();
        let rank = a.reduce_rref(field);
        let pivots = a.pivot_columns(rank);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[fc] = FieldElement::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    // characteristic 2: -a = a
                    v[pc] = a.get(r, fc);
                }
                v
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, field: &Field, other: &GfMatrix) -> GfMatrix {
        GfMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            field.mul(
                self.get(r / other.rows, c / other.cols),
                other.get(r % other.rows, c % other.cols),
            )
        })
    }

    /// Vandermonde matrix with entry `(r, j) = nodes[j]^r`.
    pub fn vandermonde(field: &Field, nodes: &[FieldElement], num_rows: usize) -> Result<GfMatrix, LinalgError> {
        for (i, a) in nodes.iter().enumerate() {
            if nodes[..i].contains(a) {
                return Err(LinalgError::DuplicateNode(*a));
            }
        }
        let mut m = GfMatrix::zeros(num_rows, nodes.len());
        for (j, &x) in nodes.iter().enumerate() {
            let mut p = FieldElement::ONE;
            for r in 0..num_rows {
                m.set(r, j, p);
                p = field.mul(p, x);
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, field: &Field, r: usize, s: FieldElement) {
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = field.mul(*v, s);
        }
    }

    // row[dst] += f * row[src]
    fn add_scaled_row(&mut self, field: &Field, dst: usize, src: usize, f: FieldElement) {
        for c in 0..self.cols {
            let v = field.add(self.get(dst, c), field.mul(f, self.get(src, c)));
            self.set(dst, c, v);
        }
    }

    // In-place forward elimination; returns the rank.
    fn eliminate_in_place(&mut self, field: &Field) -> usize {
        let mut prow = 0;
        for col in 0..self.cols {
            if prow == self.rows {
                break;
            }
            let Some(sel) = (prow..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(prow, sel);
            let inv = field.inv(self.get(prow, col)).expect("pivot is nonzero");
            self.scale_row(field, prow, inv);
            for r in prow + 1..self.rows {
                let f = self.get(r, col);
                if !f.is_zero() {
                    self.add_scaled_row(field, r, prow, f);
                }
            }
            prow += 1;
        }
        prow
    }

    // Reduced row echelon form in place; returns the rank.
    fn reduce_rref(&mut self, field: &Field) -> usize {
        let rank = self.eliminate_in_place(field);
        let pivots = self.pivot_columns(rank);
        for (r, &pc) in pivots.iter().enumerate().rev() {
            for above in 0..r {
                let f = self.get(above, pc);
                if !f.is_zero() {
                    self.add_scaled_row(field, above, r, f);
                }
            }
        }
        rank
    }

    fn pivot_columns(&self, rank: usize) -> Vec<usize> {
        (0..rank)
            .map(|r| {
                self.row(r)
                    .iter()
                    .position(|v| !v.is_zero())
                    .expect("rows above rank are nonzero")
            })
            .collect()
    }
}

pub fn dot(field: &Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}
