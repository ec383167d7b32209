//! Parameter search over multisets and local-code permutations.
//!
//! Candidates are enumerated in a fixed canonical order, screened by exact
//! dimension and by the distances of the four slice codes, and survivors get
//! randomized distance estimates on both sides. Records are appended to a
//! JSON-lines file by a single writer so an interrupted run can resume.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{
    build_lifted_in, slice_check_matrices_in, theorem1_dimension_in, theorem1_eligible, CodeSpec, CssCode,
};
use crate::distance::{estimate_classical_distance, estimate_css_distance, Depth, EstimatorOptions, Side};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::group::{FiniteGroup, GroupDescriptor};
use crate::io::{atomic_write, read_text, with_path, LocalCodeDoc, SpecDoc};
use crate::local::{distinct_permuted_codes, Family, LocalCode};
use crate::logical::LogicalOracle;

/// How multisets are identified before enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MultisetPolicy {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "translation")]
    Translation,
    #[default]
    #[serde(rename = "translation+automorphism")]
    TranslationAutomorphism,
}

impl fmt::Display for MultisetPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MultisetPolicy::None => "none",
            MultisetPolicy::Translation => "translation",
            MultisetPolicy::TranslationAutomorphism => "translation+automorphism",
        })
    }
}

impl FromStr for MultisetPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(MultisetPolicy::None),
            "translation" => Ok(MultisetPolicy::Translation),
            "translation+automorphism" => Ok(MultisetPolicy::TranslationAutomorphism),
            other => Err(Error::input(format!("unknown multiset policy {other:?}"))),
        }
    }
}

/// Which side a translation multiplies from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslationSide {
    /// `m ↦ m·h`, an equivalence for the A multiset.
    Right,
    /// `m ↦ h·m`, an equivalence for the B multiset.
    Left,
}

/// Lexicographically smallest sorted image of `m` under translations and the given maps.
pub fn canonical_multiset(group: &FiniteGroup, m: &[usize], side: TranslationSide, maps: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut img = vec![0; m.len()];
    for map in maps {
        for h in 0..group.order() {
            for (slot, &x) in img.iter_mut().zip(m) {
                let y = map[x];
                *slot = match side {
                    TranslationSide::Right => group.mul(y, h),
                    TranslationSide::Left => group.mul(h, y),
                };
            }
            img.sort_unstable();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img.clone());
            }
        }
    }
    best.unwrap_or_default()
}

fn identity_map(order: usize) -> Vec<Vec<usize>> {
    vec![(0..order).collect()]
}

/// Maps used by a policy. Falls back to translations alone when the
/// automorphism group is too large to list.
pub fn policy_maps(group: &FiniteGroup, policy: MultisetPolicy) -> Vec<Vec<usize>> {
    match policy {
        MultisetPolicy::TranslationAutomorphism => group.automorphisms().unwrap_or_else(|| {
            log::warn!("automorphism group unavailable for order {}; using translations only", group.order());
            identity_map(group.order())
        }),
        _ => identity_map(group.order()),
    }
}

/// Multisets of `size` elements as sorted index vectors, one per class under
/// `policy`, in lexicographic order. Right translation is used for the
/// translation policies.
pub fn enumerate_multisets(group: &FiniteGroup, size: usize, policy: MultisetPolicy) -> Vec<Vec<usize>> {
    let maps = policy_maps(group, policy);
    enumerate_multisets_with(group, size, policy != MultisetPolicy::None, TranslationSide::Right, &maps)
}

/// As [`enumerate_multisets`] with an explicit translation side and map set.
pub fn enumerate_multisets_with(
    group: &FiniteGroup,
    size: usize,
    translate: bool,
    side: TranslationSide,
    maps: &[Vec<usize>],
) -> Vec<Vec<usize>> {
    (0..group.order())
        .combinations_with_replacement(size)
        .filter(|m| !translate || canonical_multiset(group, m, side, maps) == *m)
        .collect()
}

/// Outcome of screening by slice-code distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceFilterResult {
    pub pass: bool,
    /// Upper bounds for the four slice codes in the order of
    /// [`crate::code::SliceMatrices::all`]; `None` means the slice code is trivial.
    pub estimates: [Option<usize>; 4],
}

impl SliceFilterResult {
    pub fn min_estimate(&self) -> Option<usize> {
        self.estimates.iter().flatten().copied().min()
    }
}

/// Estimates all four slice distances; passes iff each is at least `threshold`.
pub fn slice_filter(spec: &CodeSpec, threshold: usize, budget: usize, seed: u64) -> Result<SliceFilterResult> {
    let group = spec.validate()?;
    slice_filter_in(spec, &group, threshold, budget, seed)
}

pub fn slice_filter_in(
    spec: &CodeSpec,
    group: &FiniteGroup,
    threshold: usize,
    budget: usize,
    seed: u64,
) -> Result<SliceFilterResult> {
    let slices = slice_check_matrices_in(spec, group)?;
    let mut estimates = [None; 4];
    for (slot, (i, h)) in estimates.iter_mut().zip(slices.all().into_iter().enumerate()) {
        let opts = EstimatorOptions::new(budget, mix(seed, i as u64 + 1));
        *slot = estimate_classical_distance(h, &opts)?.map(|e| e.upper_bound);
    }
    let pass = estimates.iter().all(|e| e.is_none_or(|d| d >= threshold));
    Ok(SliceFilterResult { pass, estimates })
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn mix(seed: u64, salt: u64) -> u64 {
    splitmix(seed ^ splitmix(salt))
}

/// Seed used for candidate `index` of a run seeded with `seed`.
pub fn candidate_seed(seed: u64, index: usize) -> u64 {
    mix(seed, index as u64)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermutationPolicy {
    /// Only the canonical code for `c1`.
    Canonical,
    /// Every distinct column permutation of the family for `c1`.
    #[default]
    All,
}

/// One side of the search: the local-code family and how its multiset is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideConfig {
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub permutations: PermutationPolicy,
    #[serde(default)]
    pub dedup: MultisetPolicy,
    /// Use exactly this multiset (group labels) instead of enumerating.
    #[serde(default)]
    pub fixed: Option<Vec<String>>,
    /// Overrides the canonical first code.
    #[serde(default)]
    pub c0: Option<LocalCodeDoc>,
    /// Overrides the list of second codes.
    #[serde(default)]
    pub c1: Option<Vec<LocalCodeDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Candidates with any other dimension are recorded as filtered.
    #[serde(default)]
    pub require_k: Option<usize>,
    /// Hard floor: every slice estimate must reach it.
    #[serde(default)]
    pub floor: usize,
    /// Candidates below this level but above the floor get the reduced distance budget.
    #[serde(default)]
    pub preferred: usize,
    #[serde(default = "default_slice_trials")]
    pub trials: usize,
}

fn default_slice_trials() -> usize {
    200
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            require_k: None,
            floor: 0,
            preferred: 0,
            trials: default_slice_trials(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceConfig {
    pub trials: usize,
    /// Budget for candidates that pass the floor but not the preferred level.
    #[serde(default)]
    pub floor_tier_trials: Option<usize>,
    /// Stop estimating a candidate once its bound is at most this value.
    #[serde(default)]
    pub early_exit: Option<usize>,
    #[serde(default)]
    pub depth: Depth,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    #[serde(default)]
    pub max_seconds: Option<f64>,
    #[serde(default)]
    pub max_candidates: Option<usize>,
    /// Stop the whole run once a record reaches this distance (and `require_k`, if set).
    #[serde(default)]
    pub stop_at_d: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub group: String,
    #[serde(default)]
    pub seed: u64,
    pub output: PathBuf,
    #[serde(default)]
    pub resume: bool,
    #[serde(default)]
    pub threads: Option<usize>,
    /// Every `audit_every`-th candidate using the fast dimension path is also checked by rank.
    #[serde(default = "default_audit")]
    pub audit_every: usize,
    pub a: SideConfig,
    pub b: SideConfig,
    #[serde(default)]
    pub filter: FilterConfig,
    pub distance: DistanceConfig,
    #[serde(default)]
    pub budget: BudgetConfig,
}

fn default_audit() -> usize {
    100
}

impl SearchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SearchConfig = toml::from_str(text).map_err(|e| {
            let offset = e.span().map_or(0, |s| s.start);
            Error::parse_line_col(text, offset, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_toml(&read_text(path)?)?;
        if cfg.output.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.output = dir.join(&cfg.output);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.distance.trials == 0 || self.filter.trials == 0 || self.distance.floor_tier_trials == Some(0) {
            return Err(Error::input("trial budgets must be at least 1"));
        }
        if self.audit_every == 0 {
            return Err(Error::input("`audit_every` must be at least 1"));
        }
        if self.budget.max_seconds.is_some_and(|s| s.is_nan() || s < 0.0) {
            return Err(Error::input("`budget.max_seconds` must be non-negative"));
        }
        self.group
            .parse::<GroupDescriptor>()
            .and_then(|d| d.build())
            .map_err(|e| Error::input(format!("key `group`: {e}")))?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionMethod {
    Rank,
    Theorem1,
    Theorem1Audited,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Filtered,
    Estimated,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Preferred,
    Floor,
}

/// Distance estimate for one side as stored in a record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideEstimate {
    pub upper_bound: usize,
    pub trials_run: usize,
    pub trials_requested: usize,
    pub seed: u64,
    pub stopped_early: bool,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub index: usize,
    pub spec_key: String,
    pub spec: SpecDoc,
    pub n: usize,
    pub k: Option<usize>,
    pub k_method: Option<DimensionMethod>,
    pub slice: Option<SliceFilterResult>,
    pub tier: Option<Tier>,
    pub x: Option<SideEstimate>,
    pub z: Option<SideEstimate>,
    /// Upper bound on the distance; `None` when nothing was estimated.
    pub d: Option<usize>,
    pub seed: u64,
    pub wall_ms: u64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Resolved search space shared read-only by the workers.
struct SearchSpace {
    descriptor: GroupDescriptor,
    group: FiniteGroup,
    a_sets: Vec<Vec<usize>>,
    b_sets: Vec<Vec<usize>>,
    a_c0: LocalCode,
    a_c1: Vec<LocalCode>,
    b_c0: LocalCode,
    b_c1: Vec<LocalCode>,
}

impl SearchSpace {
    fn len(&self) -> usize {
        self.a_sets.len() * self.b_sets.len() * self.a_c1.len() * self.b_c1.len()
    }

    /// Candidate `index` in canonical order: A multiset, B multiset, then the two permutation indices.
    fn spec(&self, index: usize) -> CodeSpec {
        let (nb1, na1, nb) = (self.b_c1.len(), self.a_c1.len(), self.b_sets.len());
        let q = index % nb1;
        let rest = index / nb1;
        let p = rest % na1;
        let rest = rest / na1;
        let bi = rest % nb;
        let ai = rest / nb;
        CodeSpec {
            group: self.descriptor.clone(),
            a: self.a_sets[ai].clone(),
            b: self.b_sets[bi].clone(),
            c0: self.a_c0.clone(),
            c1: self.a_c1[p].clone(),
            c0p: self.b_c0.clone(),
            c1p: self.b_c1[q].clone(),
            comment: None,
        }
    }
}

fn side_codes(side: &SideConfig, name: &str) -> Result<(LocalCode, Vec<LocalCode>)> {
    let keyed = |key: &str, e: Error| Error::input(format!("key `{name}.{key}`: {e}"));
    let family: Option<Family> = side.family.as_deref().map(str::parse).transpose().map_err(|e| keyed("family", e))?;
    let c0 = match (&side.c0, family) {
        (Some(doc), _) => doc.to_code().map_err(|e| keyed("c0", e))?,
        (None, Some(f)) => LocalCode::canonical(f).map_err(|e| keyed("family", e))?,
        (None, None) => return Err(Error::input(format!("key `{name}`: give `family` or `c0`"))),
    };
    let c1 = match (&side.c1, family, side.permutations) {
        (Some(docs), _, _) => docs
            .iter()
            .map(|d| d.to_code().map_err(|e| keyed("c1", e)))
            .collect::<Result<Vec<_>>>()?,
        (None, Some(Family::Rep2), _) | (None, Some(_), PermutationPolicy::Canonical) => vec![c0.clone()],
        (None, Some(f), PermutationPolicy::All) => distinct_permuted_codes(f).map_err(|e| keyed("family", e))?.to_vec(),
        (None, None, _) => vec![c0.clone()],
    };
    if c1.is_empty() || c1.iter().any(|c| c.n() != c0.n()) {
        return Err(Error::input(format!("key `{name}`: second codes must be nonempty and match the length of c0")));
    }
    Ok((c0, c1))
}

/// Whether reordering a multiset is an equivalence for these codes, i.e. both
/// are invariant under every column permutation.
fn order_free(c0: &LocalCode, c1: &[LocalCode]) -> bool {
    let rep = LocalCode::canonical(Family::Rep2).expect("rep2 is canonical");
    c0.n() <= 2 && std::iter::once(c0).chain(c1).all(|c| c.n() == 1 || c.same_code(&rep))
}

fn resolve_space(cfg: &SearchConfig) -> Result<SearchSpace> {
    let descriptor: GroupDescriptor = cfg.group.parse().map_err(|e| Error::input(format!("key `group`: {e}")))?;
    let group = descriptor.build()?;
    let (a_c0, a_c1) = side_codes(&cfg.a, "a")?;
    let (b_c0, b_c1) = side_codes(&cfg.b, "b")?;
    let fixed = |side: &SideConfig, name: &str| -> Result<Option<Vec<usize>>> {
        side.fixed
            .as_ref()
            .map(|labels| {
                labels
                    .iter()
                    .map(|l| group.element(l))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::input(format!("key `{name}.fixed`: {e}")))
            })
            .transpose()
    };
    let a_fixed = fixed(&cfg.a, "a")?;
    let b_fixed = fixed(&cfg.b, "b")?;
    let auts = |policy: MultisetPolicy| policy_maps(&group, policy);

    // Automorphisms are only equivalences when applied to A and B together.
    let (a_sets, b_sets) = match (a_fixed, b_fixed) {
        (Some(a), Some(b)) => (vec![a], vec![b]),
        (None, Some(b)) => {
            let b_free = order_free(&b_c0, &b_c1);
            let class = |m: &[usize]| {
                if b_free {
                    canonical_multiset(&group, m, TranslationSide::Left, &identity_map(group.order()))
                } else {
                    // ordered tuple up to left translation
                    (0..group.order())
                        .map(|h| m.iter().map(|&x| group.mul(h, x)).collect::<Vec<_>>())
                        .min()
                        .unwrap_or_default()
                }
            };
            let target = class(&b);
            let maps: Vec<Vec<usize>> = auts(cfg.a.dedup)
                .into_iter()
                .filter(|phi| class(&b.iter().map(|&x| phi[x]).collect::<Vec<_>>()) == target)
                .collect();
            let translate = cfg.a.dedup != MultisetPolicy::None;
            let a_sets = enumerate_multisets_with(&group, a_c0.n(), translate, TranslationSide::Right, &maps);
            (a_sets, vec![b])
        }
        (Some(a), None) => {
            let translate = cfg.b.dedup != MultisetPolicy::None;
            let maps = identity_map(group.order());
            (vec![a], enumerate_multisets_with(&group, b_c0.n(), translate, TranslationSide::Left, &maps))
        }
        (None, None) => {
            let a_sets = enumerate_multisets_with(
                &group,
                a_c0.n(),
                cfg.a.dedup != MultisetPolicy::None,
                TranslationSide::Right,
                &auts(cfg.a.dedup),
            );
            let b_sets = enumerate_multisets_with(
                &group,
                b_c0.n(),
                cfg.b.dedup != MultisetPolicy::None,
                TranslationSide::Left,
                &identity_map(group.order()),
            );
            (a_sets, b_sets)
        }
    };
    Ok(SearchSpace {
        descriptor,
        group,
        a_sets,
        b_sets,
        a_c0,
        a_c1,
        b_c0,
        b_c1,
    })
}

fn side_estimate(code: &CssCode, side: Side, opts: &EstimatorOptions) -> Result<Option<SideEstimate>> {
    Ok(estimate_css_distance(code, side, opts)?.map(|e| SideEstimate {
        upper_bound: e.upper_bound,
        trials_run: e.trials_run,
        trials_requested: e.trials_requested,
        seed: e.seed,
        stopped_early: e.stopped_early,
        witness: e.witness.support(),
    }))
}

struct Evaluated {
    n: usize,
    k: Option<usize>,
    k_method: Option<DimensionMethod>,
    slice: Option<SliceFilterResult>,
    tier: Option<Tier>,
    x: Option<SideEstimate>,
    z: Option<SideEstimate>,
    d: Option<usize>,
    status: Status,
    reason: Option<String>,
}

fn evaluate(cfg: &SearchConfig, group: &FiniteGroup, spec: &CodeSpec, index: usize, seed: u64) -> Evaluated {
    let mut out = Evaluated {
        n: spec.n_a() * spec.n_b() * group.order(),
        k: None,
        k_method: None,
        slice: None,
        tier: None,
        x: None,
        z: None,
        d: None,
        status: Status::Error,
        reason: None,
    };
    if let Err(e) = evaluate_into(cfg, group, spec, index, seed, &mut out) {
        out.status = Status::Error;
        out.reason = Some(e.to_string());
    }
    out
}

fn evaluate_into(
    cfg: &SearchConfig,
    group: &FiniteGroup,
    spec: &CodeSpec,
    index: usize,
    seed: u64,
    out: &mut Evaluated,
) -> Result<()> {
    let mut code: Option<CssCode> = None;
    let k = if theorem1_eligible(spec, group).is_ok() {
        let fast = theorem1_dimension_in(spec, group)?;
        if index.is_multiple_of(cfg.audit_every) {
            let lifted = build_lifted_in(spec, group)?;
            let exact = lifted.dimension()?;
            if exact != fast {
                return Err(Error::Integrity(format!(
                    "dimension audit failed: fast path gives {fast}, rank gives {exact}"
                )));
            }
            code = Some(lifted);
            out.k_method = Some(DimensionMethod::Theorem1Audited);
        } else {
            out.k_method = Some(DimensionMethod::Theorem1);
        }
        fast
    } else {
        let lifted = build_lifted_in(spec, group)?;
        let k = lifted.dimension()?;
        code = Some(lifted);
        out.k_method = Some(DimensionMethod::Rank);
        k
    };
    out.k = Some(k);
    out.status = Status::Filtered;
    if k == 0 {
        out.reason = Some("k = 0".into());
        return Ok(());
    }
    if let Some(req) = cfg.filter.require_k {
        if k != req {
            out.reason = Some(format!("k = {k}, require {req}"));
            return Ok(());
        }
    }
    let slice = slice_filter_in(spec, group, cfg.filter.floor, cfg.filter.trials, mix(seed, 0x51))?;
    let (pass, min_slice) = (slice.pass, slice.min_estimate());
    out.slice = Some(slice);
    if !pass {
        out.reason = Some(format!("slice distance below floor {}", cfg.filter.floor));
        return Ok(());
    }
    let preferred = min_slice.is_none_or(|d| d >= cfg.filter.preferred);
    let (tier, trials) = if preferred {
        (Tier::Preferred, cfg.distance.trials)
    } else {
        let reduced = cfg.distance.floor_tier_trials.unwrap_or((cfg.distance.trials / 10).max(1));
        (Tier::Floor, reduced)
    };
    out.tier = Some(tier);
    let code = match code {
        Some(c) => c,
        None => build_lifted_in(spec, group)?,
    };
    let opts = |salt| {
        EstimatorOptions::new(trials, mix(seed, salt))
            .with_depth(cfg.distance.depth)
            .with_early_exit(cfg.distance.early_exit)
    };
    out.x = side_estimate(&code, Side::X, &opts(0x58))?;
    let x_bound = out.x.as_ref().map(|e| e.upper_bound);
    let pruned = matches!((x_bound, cfg.distance.early_exit), (Some(b), Some(t)) if b <= t);
    if !pruned {
        out.z = side_estimate(&code, Side::Z, &opts(0x5a))?;
    }
    out.d = [x_bound, out.z.as_ref().map(|e| e.upper_bound)].into_iter().flatten().min();
    out.status = Status::Estimated;
    Ok(())
}

/// Counts and best result of a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub candidates: usize,
    pub resumed: usize,
    pub processed: usize,
    pub filtered: usize,
    pub estimated: usize,
    pub errors: usize,
    /// Candidates skipped because a budget ran out or a stop condition fired.
    pub unvisited: usize,
    pub budget_exhausted: bool,
    pub target_reached: bool,
    pub elapsed_secs: f64,
    /// Best `(n, k, d)` among estimated records, ranked as in [`rank_results`].
    pub best: Option<(usize, usize, usize)>,
    pub best_key: Option<String>,
}

impl fmt::Display for SearchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "candidates: {}", self.candidates)?;
        writeln!(f, "resumed:    {}", self.resumed)?;
        writeln!(f, "processed:  {}", self.processed)?;
        writeln!(f, "filtered:   {}", self.filtered)?;
        writeln!(f, "estimated:  {}", self.estimated)?;
        writeln!(f, "errors:     {}", self.errors)?;
        writeln!(f, "unvisited:  {}", self.unvisited)?;
        if self.budget_exhausted {
            writeln!(f, "budget exhausted")?;
        }
        if self.target_reached {
            writeln!(f, "target reached")?;
        }
        writeln!(f, "elapsed:    {:.1}s", self.elapsed_secs)?;
        match (self.best, &self.best_key) {
            (Some((n, k, d)), Some(key)) => write!(f, "best:       [[{n},{k},{d}]] {key}"),
            _ => write!(f, "best:       none"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Every record in the output file after the run, in file order.
    pub records: Vec<SearchRecord>,
    pub summary: SearchSummary,
}

/// Reads complete records from a results file. A trailing partial line is
/// dropped and the file rewritten without it; returns the records.
pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<SearchRecord>> {
    let path = path.as_ref();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(with_path(path, e).into()),
    };
    let mut records = Vec::new();
    let mut kept = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let complete = line.ends_with('\n');
        match serde_json::from_str::<SearchRecord>(line.trim_end()) {
            Ok(r) if complete => {
                records.push(r);
                kept = offset + line.len();
            }
            _ if !complete => break,
            _ if line.trim().is_empty() => kept = offset + line.len(),
            Err(e) => return Err(Error::parse_at(offset, format!("bad record: {e}"))),
            Ok(_) => unreachable!(),
        }
        offset += line.len();
    }
    if kept < text.len() {
        log::warn!("dropping {} bytes of partial record from {}", text.len() - kept, path.display());
        atomic_write(path, &text.as_bytes()[..kept])?;
    }
    Ok(records)
}

/// Runs the search described by `cfg`, appending records to `cfg.output`.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    match cfg.threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::input(format!("cannot build thread pool: {e}")))?
            .install(|| run_search_inner(cfg)),
        _ => run_search_inner(cfg),
    }
}

fn run_search_inner(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    let space = resolve_space(cfg)?;
    let mut existing = if cfg.resume {
        load_records(&cfg.output)?
    } else {
        atomic_write(&cfg.output, b"")?;
        Vec::new()
    };
    let done: HashSet<String> = existing.iter().map(|r| r.spec_key.clone()).collect();
    let total = space.len();
    let limit = cfg.budget.max_candidates.unwrap_or(usize::MAX).min(total);
    let deadline = cfg.budget.max_seconds.map(|s| start + Duration::from_secs_f64(s));
    let stop = AtomicBool::new(false);
    let budget_hit = AtomicBool::new(false);
    let processed = AtomicUsize::new(0);

    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&cfg.output)
        .map_err(|e| with_path(&cfg.output, e))?;
    let (tx, rx) = mpsc::channel::<SearchRecord>();
    let writer = std::thread::spawn(move || -> Result<Vec<SearchRecord>> {
        let mut out = Vec::new();
        for rec in rx {
            let mut line = serde_json::to_string(&rec).map_err(|e| Error::input(e.to_string()))?;
            line.push('\n');
            file.write_all(line.as_bytes())?;
            file.flush()?;
            out.push(rec);
        }
        file.sync_all()?;
        Ok(out)
    });

    let resumed = AtomicUsize::new(0);
    (0..limit).into_par_iter().for_each_with(tx, |tx, index| {
        if stop.load(Ordering::Relaxed) {
            return;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            budget_hit.store(true, Ordering::Relaxed);
            return;
        }
        let spec = space.spec(index);
        let key = spec.key();
        if done.contains(&key) {
            resumed.fetch_add(1, Ordering::Relaxed);
            return;
        }
        let t0 = Instant::now();
        let seed = candidate_seed(cfg.seed, index);
        let ev = evaluate(cfg, &space.group, &spec, index, seed);
        let doc = match SpecDoc::from_spec(&spec) {
            Ok(d) => d,
            Err(e) => {
                log::error!("candidate {index}: {e}");
                return;
            }
        };
        if let (Some(target), Some(d)) = (cfg.budget.stop_at_d, ev.d) {
            if d >= target && cfg.filter.require_k.is_none_or(|k| ev.k == Some(k)) {
                stop.store(true, Ordering::Relaxed);
            }
        }
        let rec = SearchRecord {
            index,
            spec_key: key,
            spec: doc,
            n: ev.n,
            k: ev.k,
            k_method: ev.k_method,
            slice: ev.slice,
            tier: ev.tier,
            x: ev.x,
            z: ev.z,
            d: ev.d,
            seed,
            wall_ms: t0.elapsed().as_millis() as u64,
            status: ev.status,
            reason: ev.reason,
        };
        let count = processed.fetch_add(1, Ordering::Relaxed) + 1;
        if count.is_multiple_of(100) {
            log::info!("{count} candidates processed ({:.0}s)", start.elapsed().as_secs_f64());
        }
        let _ = tx.send(rec);
    });
    let new = writer.join().map_err(|_| Error::Integrity("writer thread panicked".into()))??;

    let mut summary = SearchSummary {
        candidates: total,
        resumed: resumed.into_inner(),
        processed: new.len(),
        budget_exhausted: budget_hit.load(Ordering::Relaxed) || limit < total,
        target_reached: stop.load(Ordering::Relaxed),
        ..Default::default()
    };
    existing.extend(new);
    for r in &existing {
        match r.status {
            Status::Filtered => summary.filtered += 1,
            Status::Estimated => summary.estimated += 1,
            Status::Error => summary.errors += 1,
        }
    }
    let seen: HashSet<&str> = existing.iter().map(|r| r.spec_key.as_str()).collect();
    summary.unvisited = total.saturating_sub(seen.len());
    if let Some(best) = rank_results(&existing).into_iter().next() {
        summary.best = Some((best.n, best.k, best.d));
        summary.best_key = Some(best.spec_key);
    }
    summary.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(SearchOutcome {
        records: existing,
        summary,
    })
}

/// Rebuilds each record's code and re-checks its dimension by rank and each
/// stored witness as a nontrivial logical of the stated weight. Returns one
/// message per problem found.
pub fn verify_records(records: &[SearchRecord]) -> Vec<String> {
    records
        .par_iter()
        .filter(|r| r.status != Status::Error)
        .filter_map(|r| verify_record(r).err().map(|e| format!("record {} ({}): {e}", r.index, r.spec_key)))
        .collect()
}

pub fn verify_record(r: &SearchRecord) -> Result<()> {
    let spec = r.spec.to_spec()?;
    if spec.key() != r.spec_key {
        return Err(Error::Integrity("spec does not match its key".into()));
    }
    let group = spec.validate()?;
    let code = build_lifted_in(&spec, &group)?;
    if code.n() != r.n {
        return Err(Error::Integrity(format!("n = {}, record says {}", code.n(), r.n)));
    }
    let k = code.dimension()?;
    if r.k != Some(k) {
        return Err(Error::Integrity(format!("rank gives k = {k}, record says {:?}", r.k)));
    }
    let oracle = LogicalOracle::new(&code);
    for (est, side) in [(&r.x, Side::X), (&r.z, Side::Z)] {
        if let Some(e) = est {
            let v = BitVec::from_support(code.n(), &e.witness)?;
            if v.weight() != e.upper_bound || !oracle.is_nontrivial(&v, side)? {
                return Err(Error::Integrity(format!("{side:?} witness does not certify weight {}", e.upper_bound)));
            }
        }
    }
    Ok(())
}

/// One row of a results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub d2_over_n: f64,
    pub group: String,
    pub trials: usize,
    pub seed: u64,
    pub spec_key: String,
}

/// Estimated records sorted by `d` descending, `k` descending, `n` ascending, then key.
pub fn rank_results(records: &[SearchRecord]) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = records
        .iter()
        .filter(|r| r.status == Status::Estimated)
        .filter_map(|r| {
            let (k, d) = (r.k?, r.d?);
            let trials = [&r.x, &r.z].into_iter().flatten().map(|e| e.trials_requested).max().unwrap_or(0);
            Some(ReportRow {
                n: r.n,
                k,
                d,
                d2_over_n: (d * d) as f64 / r.n as f64,
                group: r.spec.group.clone(),
                trials,
                seed: r.seed,
                spec_key: r.spec_key.clone(),
            })
        })
        .collect();
    rows.sort_by(|a, b| {
        b.d.cmp(&a.d)
            .then(b.k.cmp(&a.k))
            .then(a.n.cmp(&b.n))
            .then_with(|| a.spec_key.cmp(&b.spec_key))
    });
    rows
}

pub const CSV_HEADER: &str = "n,k,d,d2_over_n,group,trials,seed,spec_key";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.1},{},{},{},{}",
            r.n,
            r.k,
            r.d,
            r.d2_over_n,
            csv_field(&r.group),
            r.trials,
            r.seed,
            csv_field(&r.spec_key)
        );
    }
    out
}

pub fn report_table(rows: &[ReportRow]) -> String {
    let header = ["n", "k", "d", "d²/n", "group", "trials", "seed", "spec"];
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.n.to_string(),
                r.k.to_string(),
                r.d.to_string(),
                format!("{:.1}", r.d2_over_n),
                r.group.clone(),
                r.trials.to_string(),
                r.seed.to_string(),
                r.spec_key.clone(),
            ]
        })
        .collect();
    let mut width = header.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |row: &[String]| {
        let parts: Vec<String> = row
            .iter()
            .zip(width)
            .enumerate()
            .map(|(i, (c, w))| if i < 4 { format!("{c:>w$}") } else { format!("{c:<w$}") })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&header.map(String::from));
    for row in &cells {
        line(row);
    }
    out
}
