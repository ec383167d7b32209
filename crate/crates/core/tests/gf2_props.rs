use proptest::prelude::*;
use qtanner::{BitMatrix, BitVec};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
            let mut m = BitMatrix::zeros(r, c);
            for (i, b) in bits.into_iter().enumerate() {
                if b {
                    m.set(i / c.max(1), i % c.max(1), true);
                }
            }
            m
        })
    })
}

fn matrix_with_cols(max_rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    (0..=max_rows).prop_flat_map(move |r| {
        proptest::collection::vec(any::<bool>(), r * cols).prop_map(move |bits| {
            let mut m = BitMatrix::zeros(r, cols);
            for (i, b) in bits.into_iter().enumerate() {
                if b {
                    m.set(i / cols, i % cols, true);
                }
            }
            m
        })
    })
}

/// Span of the rows by enumeration, as sorted bit strings.
fn span(m: &BitMatrix) -> Vec<String> {
    let mut out: Vec<String> = m.row_space_elements().iter().map(|v| v.to_string()).collect();
    out.sort();
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix(12, 80)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn rank_nullity(m in matrix(12, 80)) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        prop_assert_eq!(k.rank(), k.rows());
        for v in k.row_iter() {
            prop_assert!(m.mul_vec(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn rref_is_canonical(m in matrix(10, 70)) {
        let e = m.rref();
        prop_assert_eq!(e.rank(), m.rank());
        prop_assert!(e.pivots.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(&e.matrix.rref().matrix, &e.matrix);
        for (r, &p) in e.pivots.iter().enumerate() {
            for r2 in 0..e.matrix.rows() {
                prop_assert_eq!(e.matrix.get(r2, p), r == r2);
            }
        }
        for row in m.row_iter() {
            prop_assert!(e.contains(&row).unwrap());
        }
    }

    #[test]
    fn small_row_space_matches_enumeration(m in matrix(6, 9)) {
        let e = m.rref();
        prop_assert_eq!(span(&m), span(&e.matrix));
        prop_assert_eq!(span(&m).len(), 1usize << m.rank());
    }

    #[test]
    fn kron_rank_and_associativity(a in matrix(3, 4), b in matrix(3, 4), c in matrix(2, 3)) {
        prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
        prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
    }

    #[test]
    fn intersection_dimension(a in matrix_with_cols(8, 30), b in matrix_with_cols(8, 30)) {
        let i = a.intersect_row_spaces(&b).unwrap();
        let stacked = BitMatrix::stack_vertical(&[&a, &b]).unwrap();
        prop_assert_eq!(i.rank(), a.rank() + b.rank() - stacked.rank());
        for v in i.row_iter() {
            prop_assert!(a.row_space_contains(&v).unwrap());
            prop_assert!(b.row_space_contains(&v).unwrap());
        }
    }

    #[test]
    fn product_transpose(a in matrix_with_cols(6, 7), b in matrix_with_cols(5, 9)) {
        let bt = b.transpose();
        let b7 = BitMatrix::zeros(7, 9);
        let ab = a.multiply(&b7).unwrap();
        prop_assert!(ab.is_zero());
        let at = a.transpose();
        prop_assert_eq!(a.multiply(&at).unwrap().transpose(), a.multiply(&at).unwrap());
        prop_assert!(a.multiply(&bt).is_err() || a.cols() == bt.rows());
    }

    #[test]
    fn column_permutation_round_trip(m in matrix_with_cols(6, 10), perm in Just((0..10).collect::<Vec<usize>>()).prop_shuffle()) {
        let p = m.apply_column_permutation(&perm).unwrap();
        let mut inv = vec![0; perm.len()];
        for (c, &t) in perm.iter().enumerate() {
            inv[t] = c;
            for r in 0..m.rows() {
                prop_assert_eq!(p.get(r, t), m.get(r, c));
            }
        }
        prop_assert_eq!(p.apply_column_permutation(&inv).unwrap(), m.clone());
        prop_assert_eq!(p.rank(), m.rank());
    }

    #[test]
    fn bitvec_string_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..150)) {
        let v = BitVec::from_bools(&bits);
        let back: BitVec = v.to_string().parse().unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(v.weight(), bits.iter().filter(|&&b| b).count());
        prop_assert_eq!(BitVec::from_support(v.len(), &v.support()).unwrap(), v);
    }
}
