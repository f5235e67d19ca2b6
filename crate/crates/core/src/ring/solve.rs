use super::{HowellBasis, Matrix};
use crate::error::{Error, Result};

/// Precomputed solver for `x · A = b` with `A` fixed.
///
/// Built on the Howell basis of `[A | I]`: span vectors are exactly
/// `[x·A | x]`, so rows whose pivot lies in the identity block give the
/// left kernel and greedy reduction over the other rows produces `x`.
#[derive(Clone, Debug)]
pub struct LeftSolver {
    a: Matrix,
    basis: HowellBasis,
}

impl LeftSolver {
    pub fn new(a: &Matrix) -> LeftSolver {
        let aug = a
            .hstack(&Matrix::identity(a.ring(), a.rows()))
            .expect("identity has matching row count");
        LeftSolver {
            a: a.clone(),
            basis: HowellBasis::new(&aug),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    /// One `x` with `x · A = b`, or `None`.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let (q, r) = (self.a.cols(), self.a.rows());
        let mut v = b.to_vec();
        v.resize(q + r, 0);
        let (rest, _) = self.basis.express(&v, q)?;
        let ring = self.a.ring();
        Some(rest[q..].iter().map(|&x| ring.neg(x)).collect())
    }

    pub fn contains(&self, b: &[u64]) -> bool {
        self.solve(b).is_some()
    }

    /// Generators of `{x : x · A = 0}` as rows.
    pub fn kernel(&self) -> Matrix {
        let q = self.a.cols();
        let rows: Vec<Vec<u64>> = self
            .basis
            .rows()
            .iter()
            .zip(self.basis.pivots())
            .filter(|(_, &c)| c >= q)
            .map(|(row, _)| row[q..].to_vec())
            .collect();
        Matrix::from_residue_rows(self.a.ring(), self.a.rows(), &rows)
    }
}

/// Solves `X · A = B` row by row.
pub fn solve_left(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if a.ring() != b.ring() {
        return Err(Error::ring_mismatch(a.ring(), b.ring()));
    }
    if a.cols() != b.cols() {
        return Err(Error::Shape(format!(
            "solve_left: A has {} columns, B has {}",
            a.cols(),
            b.cols()
        )));
    }
    let solver = LeftSolver::new(a);
    let mut rows = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        match solver.solve(b.row(i)) {
            Some(x) => rows.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_residue_rows(a.ring(), a.rows(), &rows)))
}

/// Generators of the left kernel `{x : x · A = 0}` as rows.
pub fn left_kernel(a: &Matrix) -> Matrix {
    LeftSolver::new(a).kernel()
}

/// Outcome of [`solve_linear`]: one particular solution, if any, and the
/// kernel of `A` as columns.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub solution: Option<Matrix>,
    pub kernel: Matrix,
}

/// Solves `A · X = B` in column convention.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<LinearSolution> {
    if a.rows() != b.rows() {
        return Err(Error::Shape(format!(
            "solve_linear: A has {} rows, B has {}",
            a.rows(),
            b.rows()
        )));
    }
    let at = a.transpose();
    let solution = solve_left(&at, &b.transpose())?.map(|x| x.transpose());
    let kernel = left_kernel(&at).transpose();
    Ok(LinearSolution { solution, kernel })
}
