use std::fmt;

use serde::{Deserialize, Serialize};

use super::Ring;
use crate::error::{Error, Result};

/// Dense row-major matrix over `Z/nZ`.
///
/// Module elements are row vectors throughout the crate, so a morphism with
/// matrix `F` sends `x` to `x·F` and "first `F`, then `G`" is `F·G`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    ring: u64,
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Matrix> {
        let ring = Ring::new(r.ring)?;
        if r.entries.len() != r.rows * r.cols {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} matrix",
                r.entries.len(),
                r.rows,
                r.cols
            )));
        }
        let entries = r.entries.iter().map(|&x| ring.reduce_i64(x)).collect();
        Ok(Matrix {
            ring,
            rows: r.rows,
            cols: r.cols,
            entries,
        })
    }
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> MatrixRepr {
        MatrixRepr {
            ring: m.ring.modulus(),
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|&x| x as i64).collect(),
        }
    }
}

impl Matrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(ring: Ring, size: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, size, size);
        for i in 0..size {
            m.entries[i * size + i] = 1;
        }
        m
    }

    /// Scalar matrix `c·I`.
    pub fn scalar(ring: Ring, size: usize, c: u64) -> Matrix {
        let mut m = Matrix::zeros(ring, size, size);
        for i in 0..size {
            m.entries[i * size + i] = ring.reduce(c);
        }
        m
    }

    pub fn diagonal(ring: Ring, diag: &[u64]) -> Matrix {
        let mut m = Matrix::zeros(ring, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = ring.reduce(d);
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows(ring: Ring, rows: &[Vec<i64>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| ring.reduce_i64(x)))
            .collect();
        Ok(Matrix {
            ring,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Builds a matrix from residue rows already in `[0, n)` (reduced anyway).
    pub fn from_residue_rows(ring: Ring, cols: usize, rows: &[Vec<u64>]) -> Matrix {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            entries.extend(r.iter().map(|&x| ring.reduce(x)));
        }
        Matrix {
            ring,
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_vec(ring: Ring, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|x| ring.reduce(x)).collect();
        Ok(Matrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = self.ring.reduce(v);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_ring(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ring_mismatch(self.ring, other.ring));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = self.ring.modulus();
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    *o = (*o + a * b) % n;
                }
            }
        }
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows, "vector length");
        let n = self.ring.modulus();
        let mut out = vec![0u64; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(k)) {
                *o = (*o + a * b) % n;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |r, a, b| r.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |r, a, b| r.sub(a, b))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Ring, u64, u64) -> u64) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(&ring, a, b))
            .collect();
        Ok(Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn neg(&self) -> Matrix {
        self.map(|r, x| r.neg(x))
    }

    pub fn scale(&self, c: u64) -> Matrix {
        self.map(|r, x| r.mul(c % r.modulus(), x))
    }

    fn map(&self, f: impl Fn(&Ring, u64) -> u64) -> Matrix {
        let ring = self.ring;
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| f(&ring, x)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.rows != other.rows {
            return Err(Error::Shape(format!(
                "hstack rows {} vs {}",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows,
            cols,
            entries,
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "vstack cols {} vs {}",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Stacks many blocks vertically; all must share the column count.
    pub fn vstack_all(ring: Ring, cols: usize, blocks: &[&Matrix]) -> Result<Matrix> {
        let mut out = Matrix::zeros(ring, 0, cols);
        for b in blocks {
            out = out.vstack(b)?;
        }
        Ok(out)
    }

    pub fn block_diag(blocks: &[&Matrix], ring: Ring) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(b.ring, ring, "block ring");
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = self.get(r0 + i, c0 + j);
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        Matrix {
            ring: self.ring,
            rows: idx.len(),
            cols: self.cols,
            entries,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.ring, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.entries[i * idx.len() + jj] = self.get(i, j);
            }
        }
        m
    }

    /// Kronecker product; row index `(i, k)` maps to `i·rows(other) + k`.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Matrix::zeros(self.ring, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = self.ring.mul(a, other.get(k, l));
                        m.entries[(i * other.rows + k) * cols + j * other.cols + l] = v;
                    }
                }
            }
        }
        Ok(m)
    }

    /// Reinterprets the integer lifts in `[0, n)` over another ring.
    pub fn lift_to(&self, ring: Ring) -> Matrix {
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| ring.reduce(x)).collect(),
        }
    }

    /// Rows that are not identically zero.
    pub fn nonzero_rows(&self) -> Matrix {
        let idx: Vec<usize> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|&x| x != 0))
            .collect();
        self.select_rows(&idx)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{:?}", self.ring, self.row_vecs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    #[test]
    fn multiply_and_transpose() {
        let r = z(6);
        let a = Matrix::from_rows(r, &[vec![1, 2, 3], vec![4, 5, 0]]).unwrap();
        let b = Matrix::from_rows(r, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.row_vecs(), vec![vec![4, 5], vec![4, 5]]);
        assert_eq!(ab.transpose().transpose(), ab);
        assert_eq!(a.apply_row(&[1, 1]), vec![5, 1, 3]);
    }

    #[test]
    fn kronecker_shape() {
        let r = z(4);
        let a = Matrix::from_rows(r, &[vec![1, 2]]).unwrap();
        let b = Matrix::identity(r, 2);
        let k = a.kronecker(&b).unwrap();
        assert_eq!(k.row_vecs(), vec![vec![1, 0, 2, 0], vec![0, 1, 0, 2]]);
    }

    #[test]
    fn json_format() {
        let r = z(4);
        let a = Matrix::from_rows(r, &[vec![1, -1]]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"ring":4,"rows":1,"cols":2,"entries":[1,3]}"#);
        let back: Matrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let bad = serde_json::from_str::<Matrix>(r#"{"ring":4,"rows":2,"cols":2,"entries":[1]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Matrix::identity(z(4), 2);
        let b = Matrix::identity(z(6), 2);
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch(..))));
    }
}
