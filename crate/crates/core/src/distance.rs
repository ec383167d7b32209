//! Minimum-distance computation: exhaustive search for tiny codes and a
//! randomized information-set estimator for everything else.
//!
//! The estimator draws a random column order, brings a basis of the relevant
//! kernel into reduced echelon form with pivots taken in that order, and keeps
//! the lightest nontrivial row (or pair of rows at depth 2). Every reported
//! bound comes with a witness vector, so it is always a true upper bound.
//!
//! Trials are split into fixed-size chunks. Chunk `c` draws from the ChaCha8
//! stream `(seed, c)`, so results do not depend on the number of worker
//! threads, and running more trials only extends the sequence.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{ones, popcount, words_for, xor_into, BitMatrix, BitVec, XorBasis, WORD_BITS};

/// Trials per chunk. Part of the reproducibility contract: changing it changes
/// which random stream each trial uses.
pub const TRIAL_CHUNK: usize = 64;

/// Default size limit for [`brute_force_css_distance`].
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 28;

/// A code distance; the zero code has infinite distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn value(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => a.cmp(b),
            (Distance::Finite(_), Distance::Infinite) => Ordering::Less,
            (Distance::Infinite, Distance::Finite(_)) => Ordering::Greater,
            (Distance::Infinite, Distance::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Pauli type of the logical operators being weighed.
///
/// `Z` logicals live in `ker(Hx) \ rowspace(Hz)`; `X` logicals in
/// `ker(Hz) \ rowspace(Hx)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X,
    Z,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::X => "x",
            Side::Z => "z",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateKind {
    Quantum(Side),
    Classical,
}

/// Minimum nonzero weight in the row space of `gen`, by enumerating it.
pub fn min_weight_exhaustive(gen: &BitMatrix) -> Distance {
    let basis = gen.rref().matrix;
    let k = basis.rows();
    assert!(k <= 40, "row space of dimension {k} is too large to enumerate");
    if k == 0 {
        return Distance::Infinite;
    }
    let mut cur = vec![0u64; words_for(basis.cols())];
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << k) {
        xor_into(&mut cur, basis.row_words(step.trailing_zeros() as usize));
        best = best.min(popcount(&cur));
    }
    Distance::Finite(best)
}

/// Exact minimum distance of the classical code `ker(h)`.
pub fn classical_distance_exhaustive(h: &BitMatrix) -> Distance {
    min_weight_exhaustive(&h.kernel_basis())
}

fn side_matrices(code: &CssCode, side: Side) -> (&BitMatrix, &BitMatrix) {
    match side {
        Side::Z => (code.hx(), code.hz()),
        Side::X => (code.hz(), code.hx()),
    }
}

/// Vectors of `ker(dual_checks)` completing `rowspace(checks)` to a basis.
/// A vector `v ∈ ker(checks)` is a nontrivial logical exactly when it has odd
/// overlap with one of them.
fn logical_detectors(checks: &BitMatrix, dual_checks: &BitMatrix) -> Vec<Vec<u64>> {
    let n = checks.cols();
    let mut basis = XorBasis::new(n);
    for r in 0..checks.rows() {
        basis.insert(checks.row_words(r));
    }
    let kernel = dual_checks.kernel_basis();
    let mut detectors = Vec::new();
    for r in 0..kernel.rows() {
        if basis.insert(kernel.row_words(r)) {
            detectors.push(kernel.row_words(r).to_vec());
        }
    }
    detectors
}

fn odd_overlap(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones()) & 1 == 1
}

/// Exact distance of one side of a CSS code, by enumerating the kernel.
/// Refuses codes longer than `max_n`.
pub fn brute_force_css_distance(code: &CssCode, side: Side, max_n: usize) -> Result<Distance> {
    if code.n() > max_n {
        return Err(Error::Refused(format!(
            "exhaustive distance refused for n = {} (limit {max_n}); use the estimator",
            code.n()
        )));
    }
    let (checks, stabilizers) = side_matrices(code, side);
    let kernel = checks.kernel_basis();
    if kernel.rows() > 40 {
        return Err(Error::Refused(format!("kernel of dimension {} is too large", kernel.rows())));
    }
    // detectors for Z logicals are X logicals: ker(Hz) modulo rowspace(Hx)
    let detectors = logical_detectors(checks, stabilizers);
    if detectors.is_empty() {
        return Ok(Distance::Infinite);
    }
    let sig_words = words_for(detectors.len());
    let signatures: Vec<Vec<u64>> = (0..kernel.rows())
        .map(|r| {
            let mut sig = vec![0u64; sig_words];
            for (j, det) in detectors.iter().enumerate() {
                if odd_overlap(det, kernel.row_words(r)) {
                    sig[j / WORD_BITS] |= 1 << (j % WORD_BITS);
                }
            }
            sig
        })
        .collect();
    let mut cur = vec![0u64; words_for(code.n())];
    let mut sig = vec![0u64; sig_words];
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << kernel.rows()) {
        let flip = step.trailing_zeros() as usize;
        xor_into(&mut cur, kernel.row_words(flip));
        xor_into(&mut sig, &signatures[flip]);
        if sig.iter().any(|&w| w != 0) {
            best = best.min(popcount(&cur));
        }
    }
    Ok(Distance::Finite(best))
}

/// Exact `min(d_X, d_Z)`.
pub fn brute_force_css_min_distance(code: &CssCode, max_n: usize) -> Result<Distance> {
    Ok(brute_force_css_distance(code, Side::X, max_n)?.min(brute_force_css_distance(code, Side::Z, max_n)?))
}

/// How many basis rows are combined when scanning an echelon form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Depth {
    #[default]
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimatorOptions {
    pub trials: usize,
    pub seed: u64,
    pub depth: Depth,
    /// Stop once the bound is at most this value (checked per chunk).
    pub early_exit: Option<usize>,
}

impl EstimatorOptions {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            depth: Depth::One,
            early_exit: None,
        }
    }

    pub fn with_depth(mut self, depth: Depth) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_early_exit(mut self, target: Option<usize>) -> Self {
        self.early_exit = target;
        self
    }
}

/// An upper bound on a distance together with a certifying vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceEstimate {
    pub kind: EstimateKind,
    pub upper_bound: usize,
    pub witness: BitVec,
    pub trials_run: usize,
    pub trials_requested: usize,
    pub seed: u64,
    pub depth: Depth,
    pub early_exit: Option<usize>,
    pub stopped_early: bool,
}

/// Kernel basis plus the rule deciding which kernel vectors count.
struct InfoSetProblem {
    n: usize,
    stride: usize,
    rows: usize,
    basis: Vec<u64>,
    detectors: Option<Vec<Vec<u64>>>,
}

#[derive(Clone)]
struct ChunkBest {
    weight: usize,
    witness: Vec<u64>,
}

impl InfoSetProblem {
    fn new(kernel: &BitMatrix, detectors: Option<Vec<Vec<u64>>>) -> Self {
        let stride = words_for(kernel.cols());
        let mut basis = Vec::with_capacity(kernel.rows() * stride);
        for r in 0..kernel.rows() {
            basis.extend_from_slice(kernel.row_words(r));
        }
        Self {
            n: kernel.cols(),
            stride,
            rows: kernel.rows(),
            basis,
            detectors,
        }
    }

    #[inline]
    fn counts(&self, v: &[u64]) -> bool {
        match &self.detectors {
            None => v.iter().any(|&w| w != 0),
            Some(dets) => dets.iter().any(|d| odd_overlap(d, v)),
        }
    }

    fn run_chunk(&self, seed: u64, chunk: usize, trials: usize, depth: Depth) -> Option<ChunkBest> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let (s, k) = (self.stride, self.rows);
        let mut order: Vec<usize> = (0..self.n).collect();
        let mut m = vec![0u64; self.basis.len()];
        let mut scratch = vec![0u64; s];
        let mut best: Option<ChunkBest> = None;
        for _ in 0..trials {
            order.shuffle(&mut rng);
            m.copy_from_slice(&self.basis);
            let mut rank = 0;
            for &c in &order {
                if rank == k {
                    break;
                }
                let (w, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
                let Some(p) = (rank..k).find(|&r| m[r * s + w] & mask != 0) else {
                    continue;
                };
                if p != rank {
                    for t in 0..s {
                        m.swap(p * s + t, rank * s + t);
                    }
                }
                for r in 0..k {
                    if r != rank && m[r * s + w] & mask != 0 {
                        for t in 0..s {
                            let v = m[rank * s + t];
                            m[r * s + t] ^= v;
                        }
                    }
                }
                rank += 1;
            }
            let limit = best.as_ref().map_or(usize::MAX, |b| b.weight);
            let mut bound = limit;
            let mut found: Option<Vec<u64>> = None;
            for r in 0..k {
                let row = &m[r * s..(r + 1) * s];
                let wt = popcount(row);
                if wt < bound && self.counts(row) {
                    bound = wt;
                    found = Some(row.to_vec());
                }
            }
            if depth == Depth::Two {
                for i in 0..k {
                    for j in i + 1..k {
                        for t in 0..s {
                            scratch[t] = m[i * s + t] ^ m[j * s + t];
                        }
                        let wt = popcount(&scratch);
                        if wt < bound && self.counts(&scratch) {
                            bound = wt;
                            found = Some(scratch.clone());
                        }
                    }
                }
            }
            if let Some(witness) = found {
                best = Some(ChunkBest { weight: bound, witness });
            }
        }
        best
    }

    fn estimate(&self, opts: &EstimatorOptions, kind: EstimateKind) -> Result<Option<DistanceEstimate>> {
        if opts.trials == 0 {
            return Err(Error::input("at least one trial is required"));
        }
        let n_chunks = opts.trials.div_ceil(TRIAL_CHUNK);
        let batch = (rayon::current_num_threads() * 2).max(1);
        let mut best: Option<ChunkBest> = None;
        let mut chunks_done = 0;
        let mut stopped_early = false;
        'outer: while chunks_done < n_chunks {
            let end = (chunks_done + batch).min(n_chunks);
            let results: Vec<Option<ChunkBest>> = (chunks_done..end)
                .into_par_iter()
                .map(|c| {
                    let trials = TRIAL_CHUNK.min(opts.trials - c * TRIAL_CHUNK);
                    self.run_chunk(opts.seed, c, trials, opts.depth)
                })
                .collect();
            // merge in chunk order so ties resolve to the earliest chunk
            for r in results {
                chunks_done += 1;
                if let Some(r) = r {
                    if best.as_ref().is_none_or(|b| r.weight < b.weight) {
                        best = Some(r);
                    }
                }
                if let (Some(target), Some(b)) = (opts.early_exit, &best) {
                    if b.weight <= target && chunks_done < n_chunks {
                        stopped_early = true;
                        break 'outer;
                    }
                }
            }
        }
        Ok(best.map(|b| DistanceEstimate {
            kind,
            upper_bound: b.weight,
            witness: BitVec::from_words(self.n, b.witness),
            trials_run: (chunks_done * TRIAL_CHUNK).min(opts.trials),
            trials_requested: opts.trials,
            seed: opts.seed,
            depth: opts.depth,
            early_exit: opts.early_exit,
            stopped_early,
        }))
    }
}

/// Randomized upper bound on one side of a CSS code. Returns `None` when the
/// code has no logical operators.
pub fn estimate_css_distance(code: &CssCode, side: Side, opts: &EstimatorOptions) -> Result<Option<DistanceEstimate>> {
    let (checks, stabilizers) = side_matrices(code, side);
    let detectors = logical_detectors(checks, stabilizers);
    if detectors.is_empty() {
        if opts.trials == 0 {
            return Err(Error::input("at least one trial is required"));
        }
        return Ok(None);
    }
    let problem = InfoSetProblem::new(&checks.kernel_basis(), Some(detectors));
    problem.estimate(opts, EstimateKind::Quantum(side))
}

/// Randomized upper bound on the minimum distance of `ker(h)`. Returns `None`
/// when the kernel is trivial.
pub fn estimate_classical_distance(h: &BitMatrix, opts: &EstimatorOptions) -> Result<Option<DistanceEstimate>> {
    let kernel = h.kernel_basis();
    if kernel.rows() == 0 {
        if opts.trials == 0 {
            return Err(Error::input("at least one trial is required"));
        }
        return Ok(None);
    }
    InfoSetProblem::new(&kernel, None).estimate(opts, EstimateKind::Classical)
}

/// Re-checks a quantum witness from scratch: kernel membership by direct
/// multiplication, nontriviality by row-space membership, and weight.
pub fn verify_css_witness(code: &CssCode, est: &DistanceEstimate) -> bool {
    let EstimateKind::Quantum(side) = est.kind else {
        return false;
    };
    let (checks, stabilizers) = side_matrices(code, side);
    let Ok(syndrome) = checks.mul_vec(&est.witness) else {
        return false;
    };
    syndrome.is_zero()
        && !stabilizers.row_space_contains(&est.witness).unwrap_or(true)
        && est.witness.weight() == est.upper_bound
}

pub fn verify_classical_witness(h: &BitMatrix, est: &DistanceEstimate) -> bool {
    est.kind == EstimateKind::Classical
        && !est.witness.is_zero()
        && est.witness.weight() == est.upper_bound
        && h.mul_vec(&est.witness).map(|s| s.is_zero()).unwrap_or(false)
}

/// Support of a witness, as stored in search records.
pub fn witness_support(est: &DistanceEstimate) -> Vec<usize> {
    ones(est.witness.words()).collect()
}
