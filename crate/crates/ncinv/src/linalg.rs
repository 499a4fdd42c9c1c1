//! Exact rational vectors, matrices, and subspace arithmetic.
//!
//! Everything downstream (Lie bases, T-ideal normal forms, Reynolds images,
//! generation checks) reduces to the operations in this module. All values are
//! dense, immutable plain data over [`Scalar`]; row reduction always produces
//! the unique reduced row-echelon form, so every derived object is
//! reproducible bit for bit regardless of construction order.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{bit_size, int, Scalar};

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, found: r.len() });
            }
        }
        Ok(Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers, mostly for tests and configs.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.get_mut(c, r) = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        *out.get_mut(r, c) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] += a * &v[c];
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact inverse; `SingularMatrix` when the rank is deficient.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let (reduced, pivots, transform) = rref_with_transform(self);
        if pivots.len() != n {
            return Err(Error::SingularMatrix);
        }
        debug_assert_eq!(reduced, Matrix::identity(n));
        Ok(transform)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= s;
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        Ok(out)
    }
}

/// Reduced row-echelon form together with the pivot columns.
///
/// Pivot selection within a column takes the candidate entry of largest bit
/// length (ties broken by the lowest row index). The selection only affects
/// intermediate coefficient growth: the returned form is the canonical RREF
/// of the row space, identical for every pivoting strategy.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut work = m.clone();
    let pivots = rref_in_place(&mut work);
    (work, pivots)
}

/// Like [`rref`], additionally returning `t` with `t * m = rref(m)`.
///
/// The transform is what lets callers recover coordinates with respect to the
/// original rows rather than the echelon rows.
pub fn rref_with_transform(m: &Matrix) -> (Matrix, Vec<usize>, Matrix) {
    let mut aug = Matrix::zero(m.rows, m.cols + m.rows);
    for r in 0..m.rows {
        for c in 0..m.cols {
            *aug.get_mut(r, c) = m.get(r, c).clone();
        }
        *aug.get_mut(r, m.cols + r) = Scalar::one();
    }
    let pivots = rref_in_place_bounded(&mut aug, m.cols);
    let mut reduced = Matrix::zero(m.rows, m.cols);
    let mut transform = Matrix::zero(m.rows, m.rows);
    for r in 0..m.rows {
        for c in 0..m.cols {
            *reduced.get_mut(r, c) = aug.get(r, c).clone();
        }
        for c in 0..m.rows {
            *transform.get_mut(r, c) = aug.get(r, m.cols + c).clone();
        }
    }
    (reduced, pivots, transform)
}

fn rref_in_place(m: &mut Matrix) -> Vec<usize> {
    let cols = m.cols;
    rref_in_place_bounded(m, cols)
}

/// Row-reduce, treating only the first `pivot_cols` columns as pivot
/// candidates (the remainder is carried along, e.g. an augmented identity).
fn rref_in_place_bounded(m: &mut Matrix, pivot_limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..pivot_limit {
        if next_row >= m.rows {
            break;
        }
        // Choose the pivot among nonzero candidates by largest bit length.
        let mut best: Option<(usize, u64)> = None;
        for r in next_row..m.rows {
            let entry = m.get(r, col);
            if !entry.is_zero() {
                let size = bit_size(entry);
                if best.is_none_or(|(_, s)| size > s) {
                    best = Some((r, size));
                }
            }
        }
        let Some((pivot_row, _)) = best else { continue };
        m.swap_rows(next_row, pivot_row);
        let inv = {
            let p = m.get(next_row, col).clone();
            Scalar::one() / p
        };
        for c in col..m.cols {
            let v = m.get(next_row, c).clone();
            if !v.is_zero() {
                *m.get_mut(next_row, c) = v * &inv;
            }
        }
        for r in 0..m.rows {
            if r == next_row {
                continue;
            }
            let factor = m.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..m.cols {
                let x = m.get(next_row, c).clone();
                if !x.is_zero() {
                    let cur = m.get(r, c).clone();
                    *m.get_mut(r, c) = cur - &factor * x;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    pivots
}

impl Matrix {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Basis of the null space `{ v : m v = 0 }`, one vector per free column in
/// ascending column order.
pub fn kernel(m: &Matrix) -> Vec<Vec<Scalar>> {
    let (red, pivots) = rref(m);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; m.cols];
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut v = vec![Scalar::zero(); m.cols];
        v[free] = Scalar::one();
        for (&pc, row) in pivots.iter().zip(0..) {
            v[pc] = -red.get(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// A finite-dimensional subspace of `K^ambient`, stored as the canonical
/// reduced row-echelon basis. Equality of `Subspace` values is equality of
/// subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_vectors(ambient, Matrix::identity(ambient).row_vecs()).unwrap()
    }

    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
            }
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let m = Matrix::from_rows(vectors)?;
        let (red, pivots) = rref(&m);
        let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Ok(Subspace { ambient, basis, pivots })
    }

    /// Assemble directly from rows already known to be in RREF with the given
    /// pivot columns. Used by context caches that maintain echelon data
    /// incrementally; debug builds verify the claim.
    pub(crate) fn from_echelon_unchecked(ambient: usize, basis: Vec<Vec<Scalar>>, pivots: Vec<usize>) -> Self {
        let s = Subspace { ambient, basis, pivots };
        debug_assert!({
            let again = Subspace::from_vectors(s.ambient, s.basis.clone()).unwrap();
            again == s
        });
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    /// If `v` lies in the span, return its (unique) coordinates in the echelon
    /// basis; otherwise `None`.
    pub fn span_contains(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: v.len() });
        }
        // Since the basis is in RREF, the coordinate along row i can be read
        // off at that row's pivot column.
        let coords: Vec<Scalar> = self.pivots.iter().map(|&c| v[c].clone()).collect();
        let mut residual = v.to_vec();
        for (row, coeff) in self.basis.iter().zip(&coords) {
            if coeff.is_zero() {
                continue;
            }
            for (x, b) in residual.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= coeff * b;
                }
            }
        }
        if residual.iter().all(Scalar::is_zero) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        matches!(self.span_contains(v), Ok(Some(_)))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.basis.iter().all(|v| self.contains(v))
    }

    /// Echelon basis of `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.ambient, rows)
    }

    /// Intersection, computed from the kernel of the stacked coefficient
    /// system (a vector in both spans is a combination of either basis).
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // Columns: coefficients on self.basis, then on other.basis.
        let mut m = Matrix::zero(self.ambient, self.dim() + other.dim());
        for (j, b) in self.basis.iter().enumerate() {
            for i in 0..self.ambient {
                *m.get_mut(i, j) = b[i].clone();
            }
        }
        for (j, b) in other.basis.iter().enumerate() {
            for i in 0..self.ambient {
                *m.get_mut(i, self.dim() + j) = -b[i].clone();
            }
        }
        let mut vectors = Vec::new();
        for k in kernel(&m) {
            let mut v = vec![Scalar::zero(); self.ambient];
            for (j, b) in self.basis.iter().enumerate() {
                if k[j].is_zero() {
                    continue;
                }
                for i in 0..self.ambient {
                    if !b[i].is_zero() {
                        v[i] += &k[j] * &b[i];
                    }
                }
            }
            vectors.push(v);
        }
        Subspace::from_vectors(self.ambient, vectors)
    }

    /// A deterministic direct complement `C` of `small` inside `self`, i.e.
    /// `small ⊕ C = self`, obtained by echelon completion: the basis rows of
    /// `self` are scanned in ambient coordinate order and kept whenever they
    /// enlarge the span.
    pub fn quotient_complement(&self, small: &Subspace) -> Result<Subspace> {
        if self.ambient != small.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: small.ambient });
        }
        if !self.contains_subspace(small) {
            return Err(Error::NotSubspace);
        }
        let mut current = small.clone();
        let mut chosen = Vec::new();
        for row in &self.basis {
            if !current.contains(row) {
                chosen.push(row.clone());
                current = current.sum(&Subspace::from_vectors(self.ambient, vec![row.clone()])?)?;
            }
        }
        debug_assert_eq!(current, *self);
        let complement = Subspace::from_vectors(self.ambient, chosen)?;
        debug_assert_eq!(complement.dim() + small.dim(), self.dim());
        debug_assert_eq!(complement.intersection(small)?.dim(), 0);
        Ok(complement)
    }
}
