use super::{xgcd, Matrix, Ring};

/// Invariant-factor decomposition `left · m · right = diag`.
///
/// `diag` has `min(rows, cols)` entries. Each nonzero entry is a proper
/// divisor of `n`, zero entries come last, and `diag[i]` divides
/// `diag[i + 1]` inside `Z/nZ`. `right_inv` is the inverse of `right`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<u64>,
    pub left: Matrix,
    pub right: Matrix,
    pub right_inv: Matrix,
}

impl SmithForm {
    /// The diagonal matrix with the same shape as the input.
    pub fn diagonal_matrix(&self) -> Matrix {
        let mut d = Matrix::zeros(self.left.ring(), self.left.rows(), self.right.rows());
        for (i, &v) in self.diag.iter().enumerate() {
            d.set(i, i, v);
        }
        d
    }
}

struct Work {
    ring: Ring,
    m: Vec<Vec<u64>>,
    left: Vec<Vec<u64>>,
    right: Vec<Vec<u64>>,
    right_inv: Vec<Vec<u64>>,
}

fn identity(k: usize) -> Vec<Vec<u64>> {
    (0..k)
        .map(|i| {
            let mut r = vec![0; k];
            r[i] = 1;
            r
        })
        .collect()
}

/// `(rows a, b) ← (s·a + t·b, u·a + v·b)` on a row-major table.
fn rows2(ring: Ring, t: &mut [Vec<u64>], a: usize, b: usize, c: [u64; 4]) {
    let n = ring.modulus();
    for k in 0..t[a].len() {
        let (x, y) = (t[a][k], t[b][k]);
        t[a][k] = (c[0] * x + c[1] * y) % n;
        t[b][k] = (c[2] * x + c[3] * y) % n;
    }
}

/// `(cols a, b) ← (s·a + t·b, u·a + v·b)` on a row-major table.
fn cols2(ring: Ring, t: &mut [Vec<u64>], a: usize, b: usize, c: [u64; 4]) {
    let n = ring.modulus();
    for row in t.iter_mut() {
        let (x, y) = (row[a], row[b]);
        row[a] = (c[0] * x + c[1] * y) % n;
        row[b] = (c[2] * x + c[3] * y) % n;
    }
}

impl Work {
    fn coeffs(&self, c: [i64; 4]) -> [u64; 4] {
        c.map(|x| self.ring.reduce_i64(x))
    }

    /// Unimodular row operation with determinant one.
    fn row_op(&mut self, a: usize, b: usize, c: [i64; 4]) {
        let c = self.coeffs(c);
        rows2(self.ring, &mut self.m, a, b, c);
        rows2(self.ring, &mut self.left, a, b, c);
    }

    /// Unimodular column operation with determinant one.
    fn col_op(&mut self, a: usize, b: usize, c: [i64; 4]) {
        let [s, t, u, v] = c;
        let fwd = self.coeffs(c);
        cols2(self.ring, &mut self.m, a, b, fwd);
        cols2(self.ring, &mut self.right, a, b, fwd);
        let inv = self.coeffs([v, -u, -t, s]);
        rows2(self.ring, &mut self.right_inv, a, b, inv);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.m.swap(a, b);
            self.left.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for row in self.m.iter_mut().chain(self.right.iter_mut()) {
                row.swap(a, b);
            }
            self.right_inv.swap(a, b);
        }
    }

    fn scale_row(&mut self, a: usize, u: u64) {
        let n = self.ring.modulus();
        for x in self.m[a].iter_mut().chain(self.left[a].iter_mut()) {
            *x = (*x * u) % n;
        }
    }

    /// Clears column `t` below and row `t` right of the pivot.
    fn clear_cross(&mut self, t: usize) {
        let (rows, cols) = (self.m.len(), self.m[0].len());
        loop {
            for i in t + 1..rows {
                let (a, b) = (self.m[t][t] as i64, self.m[i][t] as i64);
                if b == 0 {
                    continue;
                }
                if a != 0 && b % a == 0 {
                    self.row_op(t, i, [1, 0, -(b / a), 1]);
                } else {
                    let (g, s, x) = xgcd(a, b);
                    self.row_op(t, i, [s, x, -b / g, a / g]);
                }
            }
            for j in t + 1..cols {
                let (a, b) = (self.m[t][t] as i64, self.m[t][j] as i64);
                if b == 0 {
                    continue;
                }
                if a != 0 && b % a == 0 {
                    self.col_op(t, j, [1, 0, -(b / a), 1]);
                } else {
                    let (g, s, x) = xgcd(a, b);
                    self.col_op(t, j, [s, x, -b / g, a / g]);
                }
            }
            let u = self.ring.unit_normalizer(self.m[t][t]);
            if u != 1 {
                self.scale_row(t, u);
            }
            if (t + 1..rows).all(|i| self.m[i][t] == 0) {
                return;
            }
        }
    }
}

/// Invariant factors of a matrix over `Z/nZ`.
///
/// Elimination runs directly over `Z/nZ` with pivots normalized to divisors
/// of `n`; the resulting diagonal agrees with the integer Smith form of the
/// lifted matrix reduced mod `n`, up to units.
pub fn smith_form(m: &Matrix) -> SmithForm {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        ring,
        m: m.row_vecs(),
        left: identity(rows),
        right: identity(cols),
        right_inv: identity(cols),
    };
    let k = rows.min(cols);
    let mut t = 0;
    while t < k {
        // Pivot: the entry generating the largest ideal.
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = w.m[i][j];
                if x != 0 {
                    let g = ring.ideal_divisor(x);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            w.clear_cross(t);
            let p = w.m[t][t];
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.m[i][j].is_multiple_of(p)));
            match offender {
                Some(i) => w.row_op(t, i, [1, 1, 0, 1]),
                None => break,
            }
        }
        t += 1;
    }
    let diag = (0..k).map(|i| w.m[i][i]).collect();
    SmithForm {
        diag,
        left: Matrix::from_residue_rows(ring, rows, &w.left),
        right: Matrix::from_residue_rows(ring, cols, &w.right),
        right_inv: Matrix::from_residue_rows(ring, cols, &w.right_inv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    fn check(m: &Matrix) -> SmithForm {
        let s = smith_form(m);
        let lmr = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        assert_eq!(lmr, s.diagonal_matrix());
        let id = Matrix::identity(m.ring(), m.cols());
        assert_eq!(s.right.mul(&s.right_inv).unwrap(), id);
        s
    }

    #[test]
    fn scalar_diagonal() {
        let m = Matrix::from_rows(z(12), &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(check(&m).diag, vec![2, 2]);
    }

    #[test]
    fn upper_triangular_over_z4() {
        let m = Matrix::from_rows(z(4), &[vec![2, 2], vec![0, 2]]).unwrap();
        assert_eq!(check(&m).diag, vec![2, 2]);
    }

    #[test]
    fn single_entry() {
        let m = Matrix::from_rows(z(6), &[vec![3]]).unwrap();
        assert_eq!(check(&m).diag, vec![3]);
    }

    #[test]
    fn coprime_entries_merge() {
        let m = Matrix::from_rows(z(12), &[vec![4, 0], vec![0, 3]]).unwrap();
        assert_eq!(check(&m).diag, vec![1, 0]);
    }

    #[test]
    fn non_dividing_pivot_is_repaired() {
        let m = Matrix::from_rows(z(12), &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(check(&m).diag, vec![1, 6]);
    }

    #[test]
    fn rectangular_and_zero() {
        let m = Matrix::from_rows(z(8), &[vec![0, 4, 6], vec![0, 0, 0]]).unwrap();
        assert_eq!(check(&m).diag, vec![2, 0]);
        let zero = Matrix::zeros(z(8), 3, 2);
        assert_eq!(check(&zero).diag, vec![0, 0]);
    }
}
