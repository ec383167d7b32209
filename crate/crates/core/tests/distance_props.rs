use proptest::prelude::*;
use qtanner::distance::{brute_force_css_distance, estimate_classical_distance, verify_classical_witness, verify_css_witness};
use qtanner::{BitMatrix, BitVec, CssCode, Distance, EstimatorOptions, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
    let rows: Vec<BitVec> = (0..rows)
        .map(|_| BitVec::from_bools(&(0..cols).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()))
        .collect();
    BitMatrix::from_rows(cols, &rows).unwrap()
}

/// Hx random, Hz a random set of combinations of vectors orthogonal to Hx.
fn random_css(seed: u64, max_n: usize) -> CssCode {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=max_n);
    let r = rng.gen_range(1..=n / 2);
    let hx = random_matrix(&mut rng, r, n);
    let ker = hx.kernel_basis();
    let r = rng.gen_range(1..=n / 2);
    let mix = random_matrix(&mut rng, r, ker.rows());
    let hz = mix.multiply(&ker).unwrap();
    CssCode::new(hx, hz).unwrap()
}

fn exact(code: &CssCode, side: Side) -> Option<usize> {
    match brute_force_css_distance(code, side, 24).unwrap() {
        Distance::Finite(d) => Some(d),
        Distance::Infinite => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimate_is_an_upper_bound(seed in any::<u64>(), side in prop_oneof![Just(Side::X), Just(Side::Z)]) {
        let code = random_css(seed, 16);
        let est = qtanner::distance::estimate_css_distance(&code, side, &EstimatorOptions::new(200, seed)).unwrap();
        match (est, exact(&code, side)) {
            (None, None) => {}
            (Some(e), Some(d)) => {
                prop_assert!(e.upper_bound >= d);
                prop_assert!(verify_css_witness(&code, &e));
                prop_assert_eq!(e.witness.weight(), e.upper_bound);
            }
            (e, d) => prop_assert!(false, "estimate {:?} vs exact {:?}", e.map(|e| e.upper_bound), d),
        }
    }

    #[test]
    fn more_trials_never_hurt(seed in any::<u64>()) {
        let code = random_css(seed, 20);
        let bound = |t| qtanner::distance::estimate_css_distance(&code, Side::X, &EstimatorOptions::new(t, seed))
            .unwrap()
            .map(|e| e.upper_bound);
        let (a, b, c) = (bound(10), bound(100), bound(400));
        if let (Some(a), Some(b), Some(c)) = (a, b, c) {
            prop_assert!(a >= b && b >= c);
        }
    }

    #[test]
    fn classical_estimate_is_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=18);
        let r = rng.gen_range(1..n);
        let h = random_matrix(&mut rng, r, n);
        let est = estimate_classical_distance(&h, &EstimatorOptions::new(100, seed)).unwrap();
        match (est, qtanner::distance::classical_distance_exhaustive(&h)) {
            (None, Distance::Infinite) => {}
            (Some(e), Distance::Finite(d)) => {
                prop_assert!(e.upper_bound >= d);
                prop_assert!(verify_classical_witness(&h, &e));
            }
            (e, d) => prop_assert!(false, "estimate {:?} vs exact {:?}", e.map(|e| e.upper_bound), d),
        }
    }
}

#[test]
fn same_seed_same_result() {
    let code = random_css(11, 40);
    let opts = EstimatorOptions::new(300, 99);
    let first = qtanner::distance::estimate_css_distance(&code, Side::Z, &opts).unwrap();
    for _ in 0..5 {
        assert_eq!(qtanner::distance::estimate_css_distance(&code, Side::Z, &opts).unwrap(), first);
    }
}

#[test]
fn thread_count_does_not_change_result() {
    let code = random_css(12, 60);
    let opts = EstimatorOptions::new(500, 7);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| qtanner::distance::estimate_css_distance(&code, Side::X, &opts).unwrap())
    };
    let one = run(1);
    assert_eq!(run(3), one);
    assert_eq!(run(8), one);
}
