use super::{xgcd, Matrix, Ring};

/// Result of [`howell_form`].
///
/// The input is padded with zero rows up to `rows + cols` rows so that the
/// annihilator rows the algorithm inserts have somewhere to live. With `P`
/// the padded input, `transform · P` equals `basis` followed by zero rows.
#[derive(Clone, Debug)]
pub struct HowellForm {
    pub basis: Matrix,
    pub transform: Matrix,
}

/// Canonical row-span representative of a matrix over `Z/nZ`.
///
/// Rows are in echelon form, pivots are divisors of `n`, entries above a
/// pivot are reduced into `[0, pivot)`, and the span of the rows below any
/// pivot row contains every span vector vanishing up to that pivot column.
/// The last property is what makes greedy reduction a membership test.
pub fn howell_form(m: &Matrix) -> HowellForm {
    let ring = m.ring();
    let padded = m.rows() + m.cols();
    let mut rows = m.row_vecs();
    rows.resize(padded, vec![0; m.cols()]);
    let mut transform: Vec<Vec<u64>> = (0..padded)
        .map(|i| {
            let mut r = vec![0; padded];
            r[i] = 1;
            r
        })
        .collect();
    let pivots = echelonize(ring, m.cols(), &mut rows, Some(&mut transform));

    let basis_rows: Vec<Vec<u64>> = pivots.iter().map(|&(r, _)| rows[r].clone()).collect();
    // Move the pivot rows to the top of the transform, keep the rest after.
    let mut order: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
    order.extend((0..padded).filter(|i| !pivots.iter().any(|&(r, _)| r == *i)));
    let transform_rows: Vec<Vec<u64>> = order.iter().map(|&i| transform[i].clone()).collect();
    HowellForm {
        basis: Matrix::from_residue_rows(ring, m.cols(), &basis_rows),
        transform: Matrix::from_residue_rows(ring, padded, &transform_rows),
    }
}

/// A Howell basis kept in working form for repeated reduction queries.
#[derive(Clone, Debug)]
pub struct HowellBasis {
    ring: Ring,
    cols: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl HowellBasis {
    pub fn new(m: &Matrix) -> HowellBasis {
        let ring = m.ring();
        let mut rows = m.row_vecs();
        rows.resize(m.rows() + m.cols(), vec![0; m.cols()]);
        let pivots = echelonize(ring, m.cols(), &mut rows, None);
        HowellBasis {
            ring,
            cols: m.cols(),
            rows: pivots.iter().map(|&(r, _)| rows[r].clone()).collect(),
            pivots: pivots.iter().map(|&(_, c)| c).collect(),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_residue_rows(self.ring, self.cols, &self.rows)
    }

    /// Canonical representative of `v + span`.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let p = row[c];
            let q = v[c] / p;
            if q != 0 {
                sub_scaled(self.ring, &mut v, row, q);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Writes `v` as a combination of the basis rows restricted to pivots
    /// in columns `< upto`. Returns the remainder and the coefficients, or
    /// `None` if some pivot does not divide the entry it must clear.
    pub(crate) fn express(&self, v: &[u64], upto: usize) -> Option<(Vec<u64>, Vec<u64>)> {
        let mut v = v.to_vec();
        let mut coeffs = vec![0u64; self.rows.len()];
        for (k, (row, &c)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if c >= upto {
                break;
            }
            let p = row[c];
            if !v[c].is_multiple_of(p) {
                return None;
            }
            let q = v[c] / p;
            if q != 0 {
                sub_scaled(self.ring, &mut v, row, q);
                coeffs[k] = q;
            }
        }
        if v[..upto].iter().any(|&x| x != 0) {
            return None;
        }
        Some((v, coeffs))
    }
}

#[inline]
fn sub_scaled(ring: Ring, v: &mut [u64], row: &[u64], q: u64) {
    let n = ring.modulus();
    let q = q % n;
    for (x, &r) in v.iter_mut().zip(row) {
        *x = (*x + n - (q * r) % n) % n;
    }
}

#[inline]
fn add_scaled(ring: Ring, v: &mut [u64], row: &[u64], q: u64) {
    let n = ring.modulus();
    let q = q % n;
    for (x, &r) in v.iter_mut().zip(row) {
        *x = (*x + q * r) % n;
    }
}

/// Replaces rows `(a, b)` by `(s·a + t·b, u·a + v·b)`.
fn combine(ring: Ring, rows: &mut [Vec<u64>], a: usize, b: usize, coeffs: [i64; 4]) {
    let n = ring.modulus() as i64;
    let [s, t, u, v] = coeffs.map(|c| c.rem_euclid(n) as u64);
    let (ra, rb) = (rows[a].clone(), rows[b].clone());
    let nn = ring.modulus();
    for k in 0..ra.len() {
        rows[a][k] = (s * ra[k] + t * rb[k]) % nn;
        rows[b][k] = (u * ra[k] + v * rb[k]) % nn;
    }
}

/// In-place Howell reduction. `rows` must have at least `existing + cols`
/// entries. Returns `(row index, pivot column)` for every pivot, in order.
fn echelonize(
    ring: Ring,
    cols: usize,
    rows: &mut [Vec<u64>],
    mut transform: Option<&mut Vec<Vec<u64>>>,
) -> Vec<(usize, usize)> {
    let n = ring.modulus();
    let total = rows.len();
    let mut r = 0usize;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r >= total {
            break;
        }
        for i in r + 1..total {
            if rows[i][c] == 0 {
                continue;
            }
            if rows[r][c] == 0 {
                rows.swap(r, i);
                if let Some(t) = transform.as_deref_mut() {
                    t.swap(r, i);
                }
                continue;
            }
            let (a, b) = (rows[r][c] as i64, rows[i][c] as i64);
            let (g, s, t) = xgcd(a, b);
            let coeffs = [s, t, -b / g, a / g];
            combine(ring, rows, r, i, coeffs);
            if let Some(tr) = transform.as_deref_mut() {
                combine(ring, tr, r, i, coeffs);
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        let u = ring.unit_normalizer(rows[r][c]);
        if u != 1 {
            for x in rows[r].iter_mut() {
                *x = (*x * u) % n;
            }
            if let Some(t) = transform.as_deref_mut() {
                for x in t[r].iter_mut() {
                    *x = (*x * u) % n;
                }
            }
        }
        let p = rows[r][c];
        let pivot_row = rows[r].clone();
        let pivot_tr = transform.as_deref().map(|t| t[r].clone());
        for i in 0..r {
            let q = rows[i][c] / p;
            if q != 0 {
                sub_scaled(ring, &mut rows[i], &pivot_row, q);
                if let (Some(t), Some(pt)) = (transform.as_deref_mut(), pivot_tr.as_ref()) {
                    sub_scaled(ring, &mut t[i], pt, q);
                }
            }
        }
        let ann = n / p;
        if !ann.is_multiple_of(n) && pivot_row.iter().any(|&x| !(x * ann).is_multiple_of(n)) {
            let slot = (r + 1..total)
                .find(|&i| rows[i].iter().all(|&x| x == 0))
                .expect("padding guarantees a free row for the annihilator");
            add_scaled(ring, &mut rows[slot], &pivot_row, ann);
            if let (Some(t), Some(pt)) = (transform.as_deref_mut(), pivot_tr.as_ref()) {
                add_scaled(ring, &mut t[slot], pt, ann);
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    /// Brute-force enumeration of the row span.
    fn span(m: &Matrix) -> BTreeSet<Vec<u64>> {
        let ring = m.ring();
        let n = ring.modulus();
        let mut out = BTreeSet::new();
        out.insert(vec![0; m.cols()]);
        for i in 0..m.rows() {
            let current: Vec<Vec<u64>> = out.iter().cloned().collect();
            for v in current {
                for c in 1..n {
                    let mut w = v.clone();
                    add_scaled(ring, &mut w, m.row(i), c);
                    out.insert(w);
                }
            }
        }
        out
    }

    #[test]
    fn already_in_form() {
        let m = Matrix::from_rows(z(4), &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(howell_form(&m).basis, m);
    }

    #[test]
    fn hand_reduced_example() {
        let m = Matrix::from_rows(z(4), &[vec![1, 1], vec![1, 3]]).unwrap();
        let h = howell_form(&m).basis;
        let expected = Matrix::from_rows(z(4), &[vec![1, 1], vec![0, 2]]).unwrap();
        assert_eq!(h, expected);
        assert_eq!(span(&m), span(&expected));
    }

    #[test]
    fn zero_matrix_prunes_rows() {
        let m = Matrix::zeros(z(4), 3, 2);
        let h = howell_form(&m).basis;
        assert_eq!(h.rows(), 0);
        assert_eq!(h.cols(), 2);
    }

    #[test]
    fn annihilator_row_appears() {
        let m = Matrix::from_rows(z(4), &[vec![2, 1]]).unwrap();
        let h = howell_form(&m).basis;
        assert_eq!(h.row_vecs(), vec![vec![2, 1], vec![0, 2]]);
        assert!(HowellBasis::new(&m).contains(&[0, 2]));
    }

    #[test]
    fn transform_reproduces_basis() {
        let m = Matrix::from_rows(z(12), &[vec![4, 6, 3], vec![8, 3, 9], vec![6, 6, 6]]).unwrap();
        let hf = howell_form(&m);
        let padded = m.vstack(&Matrix::zeros(z(12), 3, 3)).unwrap();
        let prod = hf.transform.mul(&padded).unwrap();
        let k = hf.basis.rows();
        assert_eq!(prod.block(0, 0, k, 3), hf.basis);
        assert!(prod.block(k, 0, prod.rows() - k, 3).is_zero());
    }
}
