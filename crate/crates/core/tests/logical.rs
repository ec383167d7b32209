use qtanner::code::{build_base, slice_check_matrices};
use qtanner::distance::{brute_force_css_min_distance, Side};
use qtanner::io::parse_spec;
use qtanner::local::{Family, LocalCode};
use qtanner::logical::{
    base_logical_basis, is_nontrivial_logical, replicate_base_logicals, slice_logical, LogicalOracle, SliceKind,
};
use qtanner::{build_lifted, BitMatrix, BitVec, CodeSpec, GroupDescriptor};

fn ham6_spec(m: usize, a: &[usize]) -> CodeSpec {
    let h6 = LocalCode::canonical(Family::Ham6).unwrap();
    let rep = LocalCode::canonical(Family::Rep2).unwrap();
    CodeSpec {
        group: GroupDescriptor::Cyclic(m),
        a: a.to_vec(),
        b: vec![0, 1],
        c0: h6.clone(),
        c1: h6,
        c0p: rep.clone(),
        c1p: rep,
        comment: None,
    }
}

#[test]
fn replicated_c5_pairs_are_certified() {
    let spec = ham6_spec(5, &[0, 1, 2, 3, 4, 0]);
    let base = base_logical_basis(&spec.c0, &spec.c1, &spec.c0p, &spec.c1p).unwrap();
    let lifted = replicate_base_logicals(&base, &spec).unwrap();
    assert_eq!(lifted.len(), 6);
    let code = build_lifted(&spec).unwrap();
    for p in &lifted.pairs {
        assert!(is_nontrivial_logical(&code, &p.x, Side::X).unwrap());
        assert!(is_nontrivial_logical(&code, &p.z, Side::Z).unwrap());
    }
    assert_eq!(lifted.pairing_matrix(), BitMatrix::identity(6));
}

#[test]
fn basis_weights_bound_the_distance() {
    let h6 = LocalCode::canonical(Family::Ham6).unwrap();
    let rep = LocalCode::canonical(Family::Rep2).unwrap();
    let base = build_base(&h6, &h6, &rep, &rep).unwrap();
    let basis = base_logical_basis(&h6, &h6, &rep, &rep).unwrap();
    let min_weight = basis.x_ops().chain(basis.z_ops()).map(BitVec::weight).min().unwrap();
    let exact = brute_force_css_min_distance(&base, 24).unwrap();
    assert!(exact.value().unwrap() <= min_weight);
    assert_eq!(exact.value(), Some(2));
}

#[test]
fn slice_kernel_rows_land_in_lifted_kernel() {
    let spec = ham6_spec(5, &[0, 0, 1, 2, 3, 4]);
    let code = build_lifted(&spec).unwrap();
    let oracle = LogicalOracle::new(&code);
    let slices = slice_check_matrices(&spec).unwrap();
    let kinds = [
        (SliceKind::ACheck, &slices.a_checks),
        (SliceKind::AGenerator, &slices.a_generators),
        (SliceKind::BGenerator, &slices.b_generators),
        (SliceKind::BCheck, &slices.b_checks),
    ];
    for (kind, matrix) in kinds {
        for row in matrix.kernel_basis().row_iter() {
            let (v, side) = slice_logical(&spec, kind, 0, &row).unwrap();
            assert_eq!(v.weight(), row.weight());
            assert!(oracle.in_kernel(&v, side).unwrap(), "{kind:?}");
        }
    }
}

/// Found by scanning C2 lifts: an A-slice codeword whose embedding is a product of X stabilizers.
#[test]
fn slice_codeword_can_be_a_stabilizer() {
    let spec = parse_spec(
        r#"
group = "cyclic(2)"
A = ["0", "1", "0", "1", "0", "1"]
B = ["0", "1"]

[local_codes]
c0 = { family = "ham6", permutation = [0, 1, 5, 3, 4, 2] }
c1 = { family = "ham6", permutation = [0, 2, 4, 1, 5, 3] }
c0p = { family = "rep2" }
c1p = { family = "rep2" }
"#,
    )
    .unwrap();
    let word: BitVec = "001111110000".parse().unwrap();
    let (v, side) = slice_logical(&spec, SliceKind::AGenerator, 0, &word).unwrap();
    assert_eq!(side, Side::X);
    let code = build_lifted(&spec).unwrap();
    assert!(LogicalOracle::new(&code).in_kernel(&v, side).unwrap());
    assert!(!is_nontrivial_logical(&code, &v, side).unwrap());
    assert!(code.hx().row_space_contains(&v).unwrap());
}
