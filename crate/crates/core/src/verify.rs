//! Sweeps that check the closed-form dimension and distance of base codes and
//! the dimension formula for lifts with a two-element repetition side.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{base_params_lemma, build_base, build_lifted_in, theorem1_dimension_in, CodeSpec};
use crate::distance::{brute_force_css_min_distance, Distance, Side};
use crate::error::Result;
use crate::gf2::{BitMatrix, BitVec};
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::local::{distinct_permuted_codes, Family, LocalCode};
use crate::logical::{base_logical_basis, GridLine, LogicalOracle};

/// A uniformly random code of length `n` and random dimension.
pub fn random_local_code(rng: &mut impl Rng, n: usize) -> Result<LocalCode> {
    let k = rng.gen_range(0..=n);
    let mut rows: Vec<BitVec> = Vec::new();
    while rows.len() < k {
        let v = BitVec::from_bools(&(0..n).map(|_| rng.gen::<bool>()).collect::<Vec<_>>());
        let mut trial = rows.clone();
        trial.push(v);
        if BitMatrix::from_rows(n, &trial)?.rank() == trial.len() {
            rows = trial;
        }
    }
    let g = BitMatrix::from_rows(n, &rows)?;
    let h = g.kernel_basis();
    LocalCode::custom(h, g)
}

/// Four local codes defining one base code.
#[derive(Clone, Debug)]
pub struct LemmaCase {
    pub label: String,
    pub c0: LocalCode,
    pub c1: LocalCode,
    pub c0p: LocalCode,
    pub c1p: LocalCode,
}

/// All ordered pairs of distinct permuted `[6,3,3]` codes with repetition
/// primed codes, followed by `random` cases of random custom codes with
/// `n_A, n_B ≤ 8`.
pub fn lemma_corpus(random: usize, seed: u64) -> Result<Vec<LemmaCase>> {
    let ham6 = distinct_permuted_codes(Family::Ham6)?;
    let rep = LocalCode::canonical(Family::Rep2)?;
    let mut out = Vec::with_capacity(ham6.len() * ham6.len() + random);
    for (i, c0) in ham6.iter().enumerate() {
        for (j, c1) in ham6.iter().enumerate() {
            out.push(LemmaCase {
                label: format!("ham6[{i}] x ham6[{j}] / rep2"),
                c0: c0.clone(),
                c1: c1.clone(),
                c0p: rep.clone(),
                c1p: rep.clone(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..random {
        let (na, nb) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        out.push(LemmaCase {
            label: format!("random #{t} (n_A = {na}, n_B = {nb}, seed {seed})"),
            c0: random_local_code(&mut rng, na)?,
            c1: random_local_code(&mut rng, na)?,
            c0p: random_local_code(&mut rng, nb)?,
            c1p: random_local_code(&mut rng, nb)?,
        });
    }
    Ok(out)
}

/// Outcome of checking one base code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub n: usize,
    pub k_formula: usize,
    pub k_rank: usize,
    /// Exact distance when `n` is within the brute-force limit and `k > 0`.
    pub d_exact: Option<Distance>,
    /// `min(d01, d01', d01⊥, d01'⊥)`.
    pub d_four_way: Distance,
    /// Minimum over the intersection codes of the families that carry logicals.
    pub d_family: Distance,
    pub symplectic_violations: Vec<String>,
}

impl LemmaCheck {
    pub fn dimension_holds(&self) -> bool {
        self.k_formula == self.k_rank
    }

    pub fn four_way_holds(&self) -> Option<bool> {
        self.d_exact.map(|d| d == self.d_four_way)
    }

    pub fn family_holds(&self) -> Option<bool> {
        self.d_exact.map(|d| d == self.d_family)
    }
}

pub fn check_lemma_case(case: &LemmaCase, distance_limit: usize) -> Result<LemmaCheck> {
    let base = build_base(&case.c0, &case.c1, &case.c0p, &case.c1p)?;
    let params = base_params_lemma(&case.c0, &case.c1, &case.c0p, &case.c1p)?;
    let k_rank = base.dimension()?;
    let d_exact = if k_rank > 0 && base.n() <= distance_limit {
        Some(brute_force_css_min_distance(&base, distance_limit)?)
    } else {
        None
    };

    let mut violations = Vec::new();
    let basis = base_logical_basis(&case.c0, &case.c1, &case.c0p, &case.c1p)?;
    if basis.len() != params.k {
        violations.push(format!("{} pairs for k = {}", basis.len(), params.k));
    }
    if basis.pairing_matrix() != BitMatrix::identity(basis.len()) {
        violations.push("pairing matrix is not the identity".into());
    }
    let oracle = LogicalOracle::new(&base);
    let n_b = case.c0p.n();
    for (t, p) in basis.pairs.iter().enumerate() {
        if !oracle.in_kernel(&p.x, Side::X)? {
            violations.push(format!("pair {t}: X not in ker Hz"));
        }
        if !oracle.in_kernel(&p.z, Side::Z)? {
            violations.push(format!("pair {t}: Z not in ker Hx"));
        }
        for (name, v, line) in [("X", &p.x, p.x_line), ("Z", &p.z, p.z_line)] {
            let confined = v.support().into_iter().all(|c| match line {
                GridLine::Row(i) => c / n_b == i,
                GridLine::Column(j) => c % n_b == j,
            });
            let rows: std::collections::BTreeSet<usize> = v.support().iter().map(|c| c / n_b).collect();
            let cols: std::collections::BTreeSet<usize> = v.support().iter().map(|c| c % n_b).collect();
            if !confined || (rows.len() > 1 && cols.len() > 1) {
                violations.push(format!("pair {t}: {name} not confined to one row or column"));
            }
        }
    }
    Ok(LemmaCheck {
        n: base.n(),
        k_formula: params.k,
        k_rank,
        d_exact,
        d_four_way: params.four_way_min(),
        d_family: params.d,
        symplectic_violations: violations,
    })
}

/// One sampled lift with `B = (0, 1)` over a cyclic group.
pub fn theorem1_sample(rng: &mut impl Rng, m: usize) -> Result<CodeSpec> {
    let family = if rng.gen::<bool>() { Family::Ham6 } else { Family::Ham8 };
    let codes = distinct_permuted_codes(family)?;
    let n_a = codes[0].n();
    let rep = LocalCode::canonical(Family::Rep2)?;
    Ok(CodeSpec {
        group: GroupDescriptor::Cyclic(m),
        a: (0..n_a).map(|_| rng.gen_range(0..m)).collect(),
        b: vec![0, 1],
        c0: codes.choose(rng).expect("30 codes").clone(),
        c1: codes.choose(rng).expect("30 codes").clone(),
        c0p: rep.clone(),
        c1p: rep,
        comment: None,
    })
}

#[derive(Clone, Debug, Default)]
pub struct TheoremReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

/// Compares the rank dimension of sampled lifts with `k01 + k01⊥` for each
/// cyclic order in `orders`.
pub fn verify_theorem1(orders: impl IntoIterator<Item = usize>, samples: usize, seed: u64) -> Result<TheoremReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TheoremReport::default();
    for m in orders {
        let group = FiniteGroup::cyclic(m)?;
        for _ in 0..samples {
            let spec = theorem1_sample(&mut rng, m)?;
            let fast = theorem1_dimension_in(&spec, &group)?;
            let exact = build_lifted_in(&spec, &group)?.dimension()?;
            report.checked += 1;
            if fast != exact {
                report.violations.push(format!("{}: formula {fast}, rank {exact}", spec.key()));
            }
        }
    }
    Ok(report)
}
