//! Dense matrices over a small finite field, with the exact linear algebra
//! the involution machinery needs: Gaussian elimination, inverses, canonical
//! column-echelon images, and eigenspace-style decompositions of involutions.
//!
//! Matrices store one byte per entry (the element code) in row-major order.
//! Shape or field disagreements in the arithmetic operators are programming
//! errors and panic; data-dependent failures (singular input, a matrix that
//! is not an involution, malformed block layouts) are reported as
//! [`MatError`] values.
//!
//! ```
//! use cigraph::gf::field;
//! use cigraph::matrix::Mat;
//!
//! let f = field(3, 1)?;
//! let a = Mat::from_rows(&f, &[vec![1, 2], vec![0, 1]])?;
//!
//! assert_eq!(a.rank(), 2);
//! let inv = a.inverse()?;
//! assert!(a.mul(&inv).is_identity());
//!
//! // diag(1, -1) is an involution; `a` itself is not.
//! let t = Mat::from_rows(&f, &[vec![1, 0], vec![0, 2]])?;
//! assert!(t.is_involution() && !a.is_involution());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod packed;

use crate::gf::{Elem, Field};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use thiserror::Error;

/// Errors from fallible matrix operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("matrix dimensions are incompatible")]
    DimensionMismatch,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not an involution")]
    NotInvolution,
    #[error("entry code {0} is not an element of the field")]
    BadEntry(u8),
}

/// A dense `rows x cols` matrix over a fixed field.
#[derive(Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<u8>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
            && self.same_field(other)
    }
}

impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.entries.hash(state);
    }
}

impl PartialOrd for Mat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mat {
    /// Byte order on (rows, cols, entries); used for deterministic listings.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.entries).cmp(&(other.rows, other.cols, &other.entries))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.entries[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            field: field.clone(),
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Scalar matrix `c * I_n`.
    pub fn scalar(field: &Field, n: usize, c: Elem) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.code();
        }
        m
    }

    /// Matrix unit with a single 1 at (row, col), zero-indexed.
    pub fn unit(field: &Field, rows: usize, cols: usize, row: usize, col: usize) -> Mat {
        let mut m = Mat::zero(field, rows, cols);
        m.entries[row * cols + col] = 1;
        m
    }

    /// Builds a matrix from raw element codes, validating each against the field.
    pub fn from_codes(
        field: &Field,
        rows: usize,
        cols: usize,
        codes: Vec<u8>,
    ) -> Result<Mat, MatError> {
        if codes.len() != rows * cols {
            return Err(MatError::DimensionMismatch);
        }
        if let Some(&c) = codes.iter().find(|&&c| c as u16 >= field.order()) {
            return Err(MatError::BadEntry(c));
        }
        Ok(Mat {
            rows,
            cols,
            field: field.clone(),
            entries: codes,
        })
    }

    /// Builds a matrix from rows of element codes; rows must be rectangular.
    pub fn from_rows(field: &Field, rows: &[Vec<u8>]) -> Result<Mat, MatError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(MatError::DimensionMismatch);
        }
        let codes: Vec<u8> = rows.iter().flatten().copied().collect();
        Mat::from_codes(field, height, width, codes)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn same_field(&self, other: &Mat) -> bool {
        std::sync::Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    pub fn get(&self, row: usize, col: usize) -> Elem {
        Elem(self.entries[row * self.cols + col])
    }

    pub fn set(&mut self, row: usize, col: usize, value: Elem) {
        self.entries[row * self.cols + col] = value.code();
    }

    /// Row-major element codes.
    pub fn codes(&self) -> &[u8] {
        &self.entries
    }

    fn assert_same_shape(&self, other: &Mat) {
        assert!(self.same_field(other), "matrix fields differ");
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "matrix shapes differ"
        );
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.assert_same_shape(other);
        let (add, q) = self.field.add_table();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add[a as usize * q + b as usize])
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            entries,
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Mat {
        let f = &self.field;
        let entries = self.entries.iter().map(|&a| f.neg(Elem(a)).code()).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            entries,
        }
    }

    pub fn scalar_mul(&self, c: Elem) -> Mat {
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .map(|&a| f.mul(Elem(a), c).code())
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            entries,
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert!(self.same_field(other), "matrix fields differ");
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let (mul, q) = self.field.mul_table();
        let (add, _) = self.field.add_table();
        let mut out = vec![0u8; self.rows * other.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.entries[i * self.cols + l] as usize;
                if a == 0 {
                    continue;
                }
                let arow = a * q;
                for j in 0..other.cols {
                    let b = other.entries[l * other.cols + j] as usize;
                    let prod = mul[arow + b] as usize;
                    let cur = out[i * other.cols + j] as usize;
                    out[i * other.cols + j] = add[cur * q + prod];
                }
            }
        }
        Mat {
            rows: self.rows,
            cols: other.cols,
            field: self.field.clone(),
            entries: out,
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = vec![0u8; self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            field: self.field.clone(),
            entries: out,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.entries.iter().enumerate().all(|(idx, &c)| {
                let (i, j) = (idx / self.cols, idx % self.cols);
                c == u8::from(i == j)
            })
    }

    /// True when the matrix squares to the identity (the identity itself counts).
    pub fn is_involution(&self) -> bool {
        self.is_square() && self.mul(self).is_identity()
    }

    /// Whether `self * other == other * self`, with early exit entry by entry.
    pub fn commutes_with(&self, other: &Mat) -> bool {
        self.assert_same_shape(other);
        assert!(self.is_square(), "commuting test needs square matrices");
        commutes_codes(&self.entries, &other.entries, self.rows, &self.field)
    }

    /// Copies the block with the given half-open row/col ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        assert!(rows.end <= self.rows && cols.end <= self.cols, "block out of range");
        let height = rows.end - rows.start;
        let width = cols.end - cols.start;
        let mut out = Vec::with_capacity(height * width);
        for i in rows {
            let base = i * self.cols;
            out.extend_from_slice(&self.entries[base + cols.start..base + cols.end]);
        }
        Mat {
            rows: height,
            cols: width,
            field: self.field.clone(),
            entries: out,
        }
    }

    /// Overwrites the block whose top-left corner is (row, col).
    pub fn paste(&mut self, row: usize, col: usize, block: &Mat) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(row + i) * self.cols + col + j] =
                    block.entries[i * block.cols + j];
            }
        }
    }

    pub fn col(&self, j: usize) -> Mat {
        self.block(0..self.rows, j..j + 1)
    }

    /// Assembles column vectors (n x 1 matrices) into an n x len matrix.
    pub fn from_cols(field: &Field, ambient: usize, cols: &[Mat]) -> Mat {
        let mut out = Mat::zero(field, ambient, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.rows, ambient, "column has wrong height");
            assert_eq!(c.cols, 1);
            for i in 0..ambient {
                out.entries[i * cols.len() + j] = c.entries[i];
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form, with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pivot_row = (r..m.rows).find(|&i| m.entries[i * m.cols + c] != 0);
            let Some(pr) = pivot_row else { continue };
            m.swap_rows(r, pr);
            let scale = f
                .inv(Elem(m.entries[r * m.cols + c]))
                .expect("pivot is nonzero");
            for j in c..m.cols {
                let v = Elem(m.entries[r * m.cols + j]);
                m.entries[r * m.cols + j] = f.mul(v, scale).code();
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = Elem(m.entries[i * m.cols + c]);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let above = Elem(m.entries[r * m.cols + j]);
                    let cur = Elem(m.entries[i * m.cols + j]);
                    m.entries[i * m.cols + j] = f.sub(cur, f.mul(factor, above)).code();
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            mat: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Mat, MatError> {
        if !self.is_square() {
            return Err(MatError::DimensionMismatch);
        }
        let n = self.rows;
        let mut aug = Mat::zero(&self.field, n, 2 * n);
        aug.paste(0, 0, self);
        aug.paste(0, n, &Mat::identity(&self.field, n));
        let reduced = aug.rref();
        if reduced.rank < n || reduced.pivots.iter().take(n).copied().ne(0..n) {
            return Err(MatError::Singular);
        }
        Ok(reduced.mat.block(0..n, n..2 * n))
    }

    /// Basis of the right kernel, one column per free variable, in free-column
    /// order. The result has `n - rank` columns (possibly zero).
    pub fn nullspace(&self) -> Mat {
        let reduced = self.rref();
        let pivots = &reduced.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = &self.field;
        let mut basis = Mat::zero(f, self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            basis.entries[fc * free.len() + idx] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                let v = Elem(reduced.mat.entries[row * self.cols + fc]);
                basis.entries[pc * free.len() + idx] = f.neg(v).code();
            }
        }
        basis
    }

    /// One solution of `self * X = rhs`, free variables set to zero, or None
    /// if the system is inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert!(self.same_field(rhs), "matrix fields differ");
        assert_eq!(self.rows, rhs.rows, "row counts differ");
        let mut aug = Mat::zero(&self.field, self.rows, self.cols + rhs.cols);
        aug.paste(0, 0, self);
        aug.paste(0, self.cols, rhs);
        let reduced = aug.rref();
        if reduced.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zero(&self.field, self.cols, rhs.cols);
        for (row, &pc) in reduced.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.entries[pc * rhs.cols + j] =
                    reduced.mat.entries[row * aug.cols + self.cols + j];
            }
        }
        Some(x)
    }

    /// Column space as a canonical subspace.
    pub fn image_basis(&self) -> SubspaceBasis {
        let reduced = self.transpose().rref();
        let basis = reduced
            .mat
            .block(0..reduced.rank, 0..self.rows)
            .transpose();
        SubspaceBasis {
            ambient: self.rows,
            basis,
        }
    }
}

/// Result of row reduction.
pub struct Rref {
    pub mat: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Stitches a grid of blocks into one matrix. Within each block row all
/// blocks must agree in height, within each block column in width, and the
/// grid must be rectangular.
pub fn block_compose(blocks: &[Vec<Mat>]) -> Result<Mat, MatError> {
    let grid_cols = blocks.first().map_or(0, |r| r.len());
    if blocks.iter().any(|r| r.len() != grid_cols) || grid_cols == 0 {
        return Err(MatError::DimensionMismatch);
    }
    let field = blocks[0][0].field.clone();
    if blocks
        .iter()
        .flatten()
        .any(|b| !(*b.field == *field))
    {
        return Err(MatError::FieldMismatch);
    }
    let heights: Vec<usize> = blocks.iter().map(|r| r[0].rows).collect();
    let widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, b) in row.iter().enumerate() {
            if b.rows != heights[bi] || b.cols != widths[bj] {
                return Err(MatError::DimensionMismatch);
            }
        }
    }
    let total_rows: usize = heights.iter().sum();
    let total_cols: usize = widths.iter().sum();
    let mut out = Mat::zero(&field, total_rows, total_cols);
    let mut row_off = 0;
    for (bi, row) in blocks.iter().enumerate() {
        let mut col_off = 0;
        for (bj, b) in row.iter().enumerate() {
            out.paste(row_off, col_off, b);
            col_off += widths[bj];
        }
        row_off += heights[bi];
    }
    Ok(out)
}

/// `g * x * g^{-1}`; fails if `g` is singular.
pub fn conjugate(g: &Mat, x: &Mat) -> Result<Mat, MatError> {
    let gi = g.inverse()?;
    Ok(g.mul(x).mul(&gi))
}

/// Early-exit commuting test on raw code slices.
pub(crate) fn commutes_codes(a: &[u8], b: &[u8], n: usize, field: &Field) -> bool {
    let (mul, q) = field.mul_table();
    let (add, _) = field.add_table();
    for i in 0..n {
        for j in 0..n {
            let mut ab = 0usize;
            let mut ba = 0usize;
            for l in 0..n {
                let p1 = mul[a[i * n + l] as usize * q + b[l * n + j] as usize] as usize;
                ab = add[ab * q + p1] as usize;
                let p2 = mul[b[i * n + l] as usize * q + a[l * n + j] as usize] as usize;
                ba = add[ba * q + p2] as usize;
            }
            if ab != ba {
                return false;
            }
        }
    }
    true
}

/// A subspace of F^n in reduced column echelon form. Two values compare equal
/// exactly when they denote the same subspace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubspaceBasis {
    ambient: usize,
    basis: Mat,
}

impl SubspaceBasis {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// The canonical basis, one column per dimension.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// Membership test for a column vector.
    pub fn contains(&self, v: &Mat) -> bool {
        assert_eq!(v.rows, self.ambient, "vector has wrong height");
        assert_eq!(v.cols, 1);
        let mut aug = Mat::zero(self.basis.field(), self.ambient, self.dim() + 1);
        aug.paste(0, 0, &self.basis);
        aug.paste(0, self.dim(), v);
        aug.rank() == self.dim()
    }

    /// Dimension of the intersection with another subspace of the same ambient
    /// space: dim A + dim B - dim(A + B).
    pub fn intersection_dim(&self, other: &SubspaceBasis) -> Result<usize, MatError> {
        if self.ambient != other.ambient {
            return Err(MatError::DimensionMismatch);
        }
        if !self.basis.same_field(&other.basis) {
            return Err(MatError::FieldMismatch);
        }
        let mut joined = Mat::zero(self.basis.field(), self.ambient, self.dim() + other.dim());
        joined.paste(0, 0, &self.basis);
        joined.paste(0, self.dim(), &other.basis);
        Ok(self.dim() + other.dim() - joined.rank())
    }
}

/// The reference involution of rank `k`: `diag(I_{n-k}, -I_k)` away from
/// characteristic two, and in characteristic two the unipotent form
/// `I_n + sum_i e_{n-k+i, n-2k+i}` (which requires `2k <= n`).
pub(crate) fn canonical_involution_matrix(field: &Field, n: usize, k: usize) -> Mat {
    assert!(k <= n, "rank exceeds dimension");
    if field.has_char_two() {
        assert!(2 * k <= n, "characteristic-two involutions have rank at most n/2");
        let mut m = Mat::identity(field, n);
        for i in 0..k {
            m.set(n - k + i, n - 2 * k + i, Elem::ONE);
        }
        m
    } else {
        let mut m = Mat::identity(field, n);
        let minus_one = field.neg(Elem::ONE);
        for i in n - k..n {
            m.set(i, i, minus_one);
        }
        m
    }
}

/// Output of [`Mat::canonicalize_involution`]: a conjugator `P` and the rank
/// `k` with `input = P * reference(n, k) * P^{-1}`. `degenerate` marks the
/// scalar involutions (`k = 0`, and `k = n` in odd characteristic), which do
/// not belong to any proper conjugacy class of this crate.
#[derive(Clone, Debug)]
pub struct Canonicalized {
    pub conjugator: Mat,
    pub k: usize,
    pub degenerate: bool,
}

impl Mat {
    /// Conjugates an involution to the reference form of its rank.
    pub fn canonicalize_involution(&self) -> Result<Canonicalized, MatError> {
        if !self.is_involution() {
            return Err(MatError::NotInvolution);
        }
        let n = self.rows;
        let f = &self.field;
        let ident = Mat::identity(f, n);
        let conjugator = if f.has_char_two() {
            // x = I + N with N^2 = 0; send the reference nilpotent onto N.
            let nil = self.sub(&ident);
            let k = nil.rank();
            let pivots = nil.rref().pivots;
            let images: Vec<Mat> = pivots.iter().map(|&c| nil.col(c)).collect();
            let preimages: Vec<Mat> = pivots
                .iter()
                .map(|&c| Mat::unit(f, n, 1, c, 0))
                .collect();
            let kernel = nil.nullspace();
            let kernel_cols: Vec<Mat> = (0..kernel.cols).map(|j| kernel.col(j)).collect();
            let middle = complete_basis(f, n, &images, &kernel_cols, n - k);
            let mut cols = middle[images.len()..].to_vec();
            cols.extend(preimages);
            cols.extend(images);
            Mat::from_cols(f, n, &cols)
        } else {
            let plus = self.sub(&ident).nullspace();
            let minus = self.add(&ident).nullspace();
            let mut cols: Vec<Mat> = (0..plus.cols).map(|j| plus.col(j)).collect();
            cols.extend((0..minus.cols).map(|j| minus.col(j)));
            Mat::from_cols(f, n, &cols)
        };
        let k = if f.has_char_two() {
            self.sub(&ident).rank()
        } else {
            n - self.sub(&ident).nullspace().cols()
        };
        debug_assert!(conjugator.is_invertible());
        debug_assert_eq!(
            conjugate(&conjugator, &canonical_involution_matrix(f, n, k)).unwrap(),
            *self
        );
        Ok(Canonicalized {
            conjugator,
            k,
            degenerate: k == 0 || k == n,
        })
    }
}

/// Extends `fixed` by members of `pool` (in order) to an independent family
/// of the requested size; returns fixed ++ chosen.
pub(crate) fn complete_basis(
    field: &Field,
    ambient: usize,
    fixed: &[Mat],
    pool: &[Mat],
    target: usize,
) -> Vec<Mat> {
    let mut chosen: Vec<Mat> = fixed.to_vec();
    let mut current = Mat::from_cols(field, ambient, &chosen);
    let mut rank = current.rank();
    assert_eq!(rank, chosen.len(), "fixed columns must be independent");
    for cand in pool {
        if chosen.len() == target {
            break;
        }
        let mut trial = Mat::zero(field, ambient, chosen.len() + 1);
        trial.paste(0, 0, &current);
        trial.paste(0, chosen.len(), cand);
        if trial.rank() == rank + 1 {
            rank += 1;
            chosen.push(cand.clone());
            current = trial;
        }
    }
    assert_eq!(chosen.len(), target, "pool did not span enough directions");
    chosen
}
