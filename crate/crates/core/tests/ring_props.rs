use std::collections::BTreeSet;

use cotlab_core::ring::{howell_form, left_kernel, smith_form, solve_linear, HowellBasis};
use cotlab_core::{Matrix, Ring};
use proptest::prelude::*;

fn matrix(n: u64, max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix> {
    (0..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..n, r * c).prop_map(move |e| {
            Matrix::from_vec(Ring::new(n).unwrap(), r, c, e).unwrap()
        })
    })
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    prop_oneof![matrix(4, 3, 3), matrix(6, 3, 3)]
}

/// All vectors of length `len` over Z/n.
fn all_vectors(n: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Row span by enumerating every coefficient vector.
fn enumerate_span(m: &Matrix) -> BTreeSet<Vec<u64>> {
    let n = m.ring().modulus();
    all_vectors(n, m.rows())
        .into_iter()
        .map(|x| {
            if m.rows() == 0 {
                vec![0; m.cols()]
            } else {
                m.apply_row(&x)
            }
        })
        .collect()
}

proptest! {
    #[test]
    fn howell_is_idempotent(m in small_matrix()) {
        let h = howell_form(&m).basis;
        prop_assert_eq!(howell_form(&h).basis, h);
    }

    #[test]
    fn howell_preserves_span(m in small_matrix()) {
        let h = howell_form(&m).basis;
        prop_assert_eq!(enumerate_span(&m), enumerate_span(&h));
    }

    #[test]
    fn howell_transform_is_exact(m in small_matrix()) {
        let hf = howell_form(&m);
        let pad = Matrix::zeros(m.ring(), m.cols(), m.cols());
        let padded = m.vstack(&pad).unwrap();
        let prod = hf.transform.mul(&padded).unwrap();
        let k = hf.basis.rows();
        prop_assert_eq!(prod.block(0, 0, k, m.cols()), hf.basis);
        prop_assert!(prod.block(k, 0, prod.rows() - k, m.cols()).is_zero());
        // Invertibility: the transform's own Howell form is the identity.
        let id = Matrix::identity(m.ring(), hf.transform.rows());
        prop_assert_eq!(howell_form(&hf.transform).basis, id);
    }

    #[test]
    fn howell_is_unique_per_span(m in small_matrix(), mix in prop::collection::vec(0u64..12, 9)) {
        // Left-multiplying by an invertible triangular matrix keeps the span.
        let r = m.rows();
        let ring = m.ring();
        let mut u = Matrix::identity(ring, r);
        let mut it = mix.iter();
        for i in 0..r {
            for j in i + 1..r {
                u.set(i, j, ring.reduce(*it.next().unwrap_or(&0)));
            }
        }
        let m2 = u.mul(&m).unwrap();
        prop_assert_eq!(howell_form(&m).basis, howell_form(&m2).basis);
    }

    #[test]
    fn membership_matches_enumeration(m in small_matrix()) {
        let span = enumerate_span(&m);
        let basis = HowellBasis::new(&m);
        for v in all_vectors(m.ring().modulus(), m.cols()) {
            prop_assert_eq!(basis.contains(&v), span.contains(&v));
        }
    }

    #[test]
    fn smith_reproduces_diagonal(m in prop_oneof![matrix(4, 4, 4), matrix(12, 4, 4), matrix(30, 3, 3)]) {
        let s = smith_form(&m);
        let lmr = s.left.mul(&m).unwrap().mul(&s.right).unwrap();
        prop_assert_eq!(lmr, s.diagonal_matrix());
        let ring = m.ring();
        prop_assert_eq!(s.right.mul(&s.right_inv).unwrap(), Matrix::identity(ring, m.cols()));
        prop_assert_eq!(howell_form(&s.left).basis, Matrix::identity(ring, m.rows()));
        for w in s.diag.windows(2) {
            prop_assert!(ring.divides(w[0], w[1]), "{:?}", s.diag);
        }
    }

    #[test]
    fn smith_counts_cokernel(m in prop_oneof![matrix(4, 3, 3), matrix(6, 3, 3)]) {
        // |Z_n^c / rowspan| from the diagonal agrees with enumeration.
        let n = m.ring().modulus() as usize;
        let s = smith_form(&m);
        let mut order = 1usize;
        for j in 0..m.cols() {
            let d = s.diag.get(j).copied().unwrap_or(0);
            order *= m.ring().ideal_divisor(d) as usize;
        }
        let total = n.pow(m.cols() as u32);
        prop_assert_eq!(order, total / enumerate_span(&m).len());
    }

    #[test]
    fn solve_linear_is_sound(a in matrix(4, 3, 3), b_seed in prop::collection::vec(0u64..4, 3)) {
        let ring = a.ring();
        let b = Matrix::from_vec(ring, a.rows(), 1, b_seed[..a.rows()].to_vec()).unwrap();
        let sol = solve_linear(&a, &b).unwrap();
        let brute = all_vectors(4, a.cols()).into_iter().find(|x| {
            let xm = Matrix::from_vec(ring, a.cols(), 1, x.clone()).unwrap();
            a.mul(&xm).unwrap() == b
        });
        prop_assert_eq!(sol.solution.is_some(), brute.is_some());
        if let Some(x) = sol.solution {
            prop_assert_eq!(a.mul(&x).unwrap(), b);
        }
        prop_assert!(a.mul(&sol.kernel).unwrap().is_zero());
    }

    #[test]
    fn kernel_generators_are_complete(a in matrix(4, 3, 3)) {
        // Brute-force column kernel must equal the span of the generators.
        let ring = a.ring();
        let kernel: BTreeSet<Vec<u64>> = all_vectors(4, a.cols())
            .into_iter()
            .filter(|x| {
                let xm = Matrix::from_vec(ring, a.cols(), 1, x.clone()).unwrap();
                a.mul(&xm).unwrap().is_zero()
            })
            .collect();
        let gens = solve_linear(&a, &Matrix::zeros(ring, a.rows(), 0)).unwrap().kernel.transpose();
        prop_assert_eq!(enumerate_span(&gens), kernel);
        prop_assert!(left_kernel(&a).mul(&a).unwrap().is_zero());
    }
}
