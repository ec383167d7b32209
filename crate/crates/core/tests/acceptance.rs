//! Acceptance run: one PASS / FAIL / INCONCLUSIVE line per criterion.
//!
//! `cargo test -p qtanner-core --test acceptance -- 1 4 8` runs a subset.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use qtanner::code::{build_lifted_in, theorem1_dimension_in, theorem1_eligible};
use qtanner::distance::{brute_force_css_distance, estimate_css_distance, verify_css_witness};
use qtanner::io::{parse_alist, parse_spec, serialize_spec, write_alist};
use qtanner::local::distinct_permuted_codes;
use qtanner::logical::{base_logical_basis, replicate_base_logicals};
use qtanner::search::{rank_results, report_csv, run_search, verify_record, SearchConfig, SearchRecord};
use qtanner::verify::{check_lemma_case, lemma_corpus, random_local_code, theorem1_sample, verify_theorem1, LemmaCheck};
use qtanner::{
    build_lifted, BitMatrix, BitVec, CodeSpec, CssCode, Distance, EstimatorOptions, Family, FiniteGroup,
    GroupDescriptor, LocalCode, Side, Twist,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Inconclusive(String),
}

use Outcome::{Fail, Inconclusive, Pass};

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

/// Empty when there is nothing to list.
fn listing<T: std::fmt::Debug>(items: &[T]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        format!(": {items:?}")
    }
}

fn configs_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

/// Lemma checks shared by criteria 1 to 3.
struct LemmaRun {
    checks: Vec<(String, LemmaCheck)>,
}

impl LemmaRun {
    fn new() -> qtanner::Result<Self> {
        let corpus = lemma_corpus(200, 0)?;
        let checks = corpus
            .iter()
            .map(|c| Ok((c.label.clone(), check_lemma_case(c, 24)?)))
            .collect::<qtanner::Result<_>>()?;
        Ok(Self { checks })
    }
}

fn c1(run: &LemmaRun) -> Outcome {
    let bad: Vec<&str> = run.checks.iter().filter(|(_, c)| !c.dimension_holds()).map(|(l, _)| l.as_str()).collect();
    verdict(
        bad.is_empty(),
        format!("{}/{} dimension identities hold{}", run.checks.len() - bad.len(), run.checks.len(), listing(&bad)),
    )
}

fn c2(run: &LemmaRun) -> Outcome {
    let compared: Vec<_> = run.checks.iter().filter(|(_, c)| c.four_way_holds().is_some()).collect();
    let bad: Vec<String> = compared
        .iter()
        .filter(|(_, c)| c.four_way_holds() == Some(false))
        .map(|(l, c)| format!("{l}: exact {:?}, four-way {:?}", c.d_exact, c.d_four_way))
        .collect();
    verdict(
        bad.is_empty(),
        format!("{}/{} base codes match the four-way minimum{}", compared.len() - bad.len(), compared.len(), listing(&bad)),
    )
}

fn c3(run: &LemmaRun) -> Outcome {
    let bad: Vec<String> = run
        .checks
        .iter()
        .filter(|(_, c)| !c.symplectic_violations.is_empty())
        .map(|(l, c)| format!("{l}: {:?}", c.symplectic_violations))
        .collect();
    verdict(bad.is_empty(), format!("{} bases, {} with violations{}", run.checks.len(), bad.len(), listing(&bad)))
}

fn c4() -> qtanner::Result<Outcome> {
    let report = verify_theorem1(2..=12, 50, 0)?;
    let desc = GroupDescriptor::Product(Box::new(GroupDescriptor::Cyclic(2)), Box::new(GroupDescriptor::Cyclic(2)));
    let group = desc.build()?;
    let x = group.element("(1,0)").or_else(|_| group.element("1"))?;
    let rep = LocalCode::canonical(Family::Rep2)?;
    let ham6 = distinct_permuted_codes(Family::Ham6)?;
    let control = CodeSpec {
        group: desc,
        a: vec![0, 0, 1, 2, 3, 1],
        b: vec![group.identity(), x],
        c0: ham6[0].clone(),
        c1: ham6[7].clone(),
        c0p: rep.clone(),
        c1p: rep,
        comment: None,
    };
    let refused = x != group.identity()
        && theorem1_eligible(&control, &group).is_err() && theorem1_dimension_in(&control, &group).is_err();
    let k_rank = build_lifted_in(&control, &group)?.dimension()?;
    Ok(verdict(
        report.violations.is_empty() && refused,
        format!(
            "{} lifts, {} violations; C2xC2 control with B = (e, x): fast path refused = {refused}, k = {k_rank} by rank",
            report.checked,
            report.violations.len()
        ),
    ))
}

fn c5() -> qtanner::Result<Outcome> {
    let (h6, h8) = (distinct_permuted_codes(Family::Ham6)?.len(), distinct_permuted_codes(Family::Ham8)?.len());
    Ok(verdict(h6 == 30 && h8 == 30, format!("ham6: {h6}, ham8: {h8}")))
}

fn c6() -> qtanner::Result<Outcome> {
    let ham6 = LocalCode::canonical(Family::Ham6)?;
    let spec = CodeSpec {
        group: GroupDescriptor::Cyclic(46),
        a: (0..6).collect(),
        b: (0..6).map(|i| 2 * i).collect(),
        c0: ham6.clone(),
        c1: ham6.clone(),
        c0p: ham6.clone(),
        c1p: ham6,
        comment: None,
    };
    let code = build_lifted(&spec)?;
    let product = code.hx().multiply(&code.hz().transpose())?;
    Ok(verdict(
        code.n() == 1656 && product.is_zero(),
        format!("n = {}, Hx·Hzᵀ has {} nonzero entries", code.n(), product.count_ones()),
    ))
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
    let rows: Vec<BitVec> = (0..rows)
        .map(|_| BitVec::from_bools(&(0..cols).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()))
        .collect();
    BitMatrix::from_rows(cols, &rows).expect("equal lengths")
}

/// Random CSS code on at most 20 qubits with at least one logical qubit.
fn random_css(rng: &mut impl Rng) -> qtanner::Result<CssCode> {
    loop {
        let n = rng.gen_range(4..=20);
        let rx = rng.gen_range(1..=n / 2);
        let hx = random_matrix(rng, rx, n);
        let ker = hx.kernel_basis();
        let rz = rng.gen_range(1..=n / 2);
        let hz = random_matrix(rng, rz, ker.rows()).multiply(&ker)?;
        let code = CssCode::new(hx, hz)?;
        if code.dimension()? > 0 {
            return Ok(code);
        }
    }
}

fn c7() -> qtanner::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut agree, mut bad_witness) = (0, 0);
    let mut notes = Vec::new();
    let codes: Vec<CssCode> = (0..100).map(|_| random_css(&mut rng)).collect::<qtanner::Result<_>>()?;
    for (t, code) in codes.iter().enumerate() {
        let mut ok = true;
        for side in [Side::X, Side::Z] {
            let est = estimate_css_distance(code, side, &EstimatorOptions::new(1000, t as u64))?;
            let exact = brute_force_css_distance(code, side, 20)?;
            match (&est, exact) {
                (Some(e), Distance::Finite(d)) => {
                    if !verify_css_witness(code, e) {
                        bad_witness += 1;
                    }
                    if e.upper_bound != d {
                        ok = false;
                        notes.push(format!("code {t} {side:?}: {} vs {d}", e.upper_bound));
                    }
                }
                (None, Distance::Infinite) => {}
                _ => ok = false,
            }
        }
        agree += usize::from(ok);
    }
    let (mut monotone, mut deterministic) = (true, true);
    for (t, code) in codes.iter().take(20).enumerate() {
        let seed = 1000 + t as u64;
        let bound = |trials| {
            estimate_css_distance(code, Side::X, &EstimatorOptions::new(trials, seed)).map(|e| e.map(|e| e.upper_bound))
        };
        let (few, many) = (bound(20)?, bound(1000)?);
        monotone &= matches!((few, many), (Some(a), Some(b)) if b <= a) || few.is_none() && many.is_none();
        let opts = EstimatorOptions::new(300, seed);
        deterministic &= estimate_css_distance(code, Side::Z, &opts)? == estimate_css_distance(code, Side::Z, &opts)?;
    }
    Ok(verdict(
        agree >= 99 && bad_witness == 0 && monotone && deterministic,
        format!(
            "{agree}/100 agree with brute force, {bad_witness} bad witnesses, monotone = {monotone}, deterministic = {deterministic}{}",
            listing(&notes)
        ),
    ))
}

fn load_config(name: &str, dir: &Path) -> qtanner::Result<SearchConfig> {
    let mut cfg = SearchConfig::load(configs_dir().join(name))?;
    cfg.output = dir.join(cfg.output.file_name().expect("file name"));
    cfg.resume = false;
    Ok(cfg)
}

fn best_hits(records: &[SearchRecord], k: usize, d_ok: impl Fn(usize) -> bool) -> Vec<&SearchRecord> {
    records.iter().filter(|r| r.k == Some(k) && r.d.is_some_and(&d_ok)).collect()
}

fn c8() -> qtanner::Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let cfg = load_config("c5_w6.toml", dir.path())?;
    let out = run_search(&cfg)?;
    let hits = best_hits(&out.records, 2, |d| d == 8);
    let verified = hits.iter().filter(|r| verify_record(r).is_ok()).count();
    let rows = rank_results(&out.records);
    let csv = report_csv(&rows);
    let line = csv.lines().find(|l| l.starts_with("60,2,8,")).unwrap_or("");
    let ratio_ok = line.split(',').nth(3) == Some("1.1");
    let first = hits.first().map_or("none".to_string(), |r| format!("{} (seed {})", r.spec_key, r.seed));
    Ok(verdict(
        verified > 0 && ratio_ok,
        format!(
            "run seed {}, {} candidates, {} estimated, {} hits with [[60,2,8]] ({verified} re-verified), d²/n = {}, first: {first}",
            cfg.seed,
            out.summary.candidates,
            out.summary.estimated,
            hits.len(),
            line.split(',').nth(3).unwrap_or("-"),
        ),
    ))
}

fn c9() -> qtanner::Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let cfg = load_config("c2xc2_n144.toml", dir.path())?;
    let out = run_search(&cfg)?;
    let s = &out.summary;
    let hit = best_hits(&out.records, 12, |d| d >= 10)
        .into_iter()
        .find(|r| r.n == 144 && verify_record(r).is_ok());
    let coverage = format!(
        "budget {}, seed {}, {}/{} candidates visited, {} estimated, {:.0}s",
        cfg.budget.max_seconds.map_or("unlimited".to_string(), |t| format!("{t}s")),
        cfg.seed,
        s.candidates - s.unvisited,
        s.candidates,
        s.estimated,
        s.elapsed_secs
    );
    Ok(match hit {
        Some(r) => Pass(format!(
            "[[{},{},{}]] {} (candidate seed {}); {coverage}",
            r.n,
            r.k.unwrap_or(0),
            r.d.unwrap_or(0),
            r.spec_key,
            r.seed
        )),
        None => {
            let best = s.best.map_or("none".to_string(), |(n, k, d)| format!("[[{n},{k},{d}]]"));
            Inconclusive(format!("no hit; best {best}; {coverage}"))
        }
    })
}

fn c10() -> qtanner::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let orders = [3, 5, 7, 9, 11];
    let (mut certified, mut skipped, mut failures) = (0, 0, Vec::new());
    let mut tried = 0;
    while certified + failures.len() < 20 && tried < 400 {
        tried += 1;
        let m = orders[tried % orders.len()];
        let spec = theorem1_sample(&mut rng, m)?;
        let group = FiniteGroup::cyclic(m)?;
        if theorem1_eligible(&spec, &group).is_err() {
            skipped += 1;
            continue;
        }
        let base = base_logical_basis(&spec.c0, &spec.c1, &spec.c0p, &spec.c1p)?;
        let lifted = match replicate_base_logicals(&base, &spec) {
            Ok(l) => l,
            Err(qtanner::Error::Precondition(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => {
                failures.push(format!("{}: {e}", spec.key()));
                continue;
            }
        };
        let code = build_lifted_in(&spec, &group)?;
        let mut ok = true;
        for p in &lifted.pairs {
            ok &= code.hz().mul_vec(&p.x)?.is_zero() && code.hx().mul_vec(&p.z)?.is_zero();
        }
        for (i, p) in lifted.pairs.iter().enumerate() {
            for (j, q) in lifted.pairs.iter().enumerate() {
                ok &= p.x.dot(&q.z) == (i == j);
            }
        }
        ok &= lifted.len() == code.dimension()?;
        if ok {
            certified += 1;
        } else {
            failures.push(spec.key());
        }
    }
    Ok(verdict(
        certified == 20 && failures.is_empty(),
        format!("{certified}/20 specs certified ({skipped} samples skipped by precondition){}", listing(&failures)),
    ))
}

fn random_code(rng: &mut ChaCha8Rng) -> qtanner::Result<LocalCode> {
    Ok(match rng.gen_range(0..4) {
        0 => LocalCode::canonical(Family::Rep2)?,
        1 => distinct_permuted_codes(Family::Ham6)?[rng.gen_range(0..30)].clone(),
        2 => distinct_permuted_codes(Family::Ham8)?[rng.gen_range(0..30)].clone(),
        _ => {
            let n = rng.gen_range(1..=8);
            random_local_code(rng, n)?
        }
    })
}

fn random_pair(rng: &mut ChaCha8Rng) -> qtanner::Result<(LocalCode, LocalCode)> {
    let c0 = random_code(rng)?;
    loop {
        let c1 = random_code(rng)?;
        if c1.n() == c0.n() {
            return Ok((c0, c1));
        }
    }
}

fn c11() -> qtanner::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut alist_ok = 0;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(0..40), rng.gen_range(1..200));
        let density = rng.gen_range(0.0..0.5);
        let rows: Vec<BitVec> = (0..r)
            .map(|_| BitVec::from_bools(&(0..c).map(|_| rng.gen_bool(density)).collect::<Vec<_>>()))
            .collect();
        let m = BitMatrix::from_rows(c, &rows)?;
        alist_ok += usize::from(parse_alist(&write_alist(&m)).ok() == Some(m));
    }
    let groups = [
        GroupDescriptor::Cyclic(1),
        GroupDescriptor::Cyclic(46),
        GroupDescriptor::Product(Box::new(GroupDescriptor::Cyclic(6)), Box::new(GroupDescriptor::Cyclic(2))),
        GroupDescriptor::Quaternion8,
        GroupDescriptor::SemidirectC4C4(Twist::Inversion),
    ];
    let mut spec_ok = 0;
    let mut hashes = BTreeSet::new();
    for t in 0..1000 {
        let group = groups[t % groups.len()].clone();
        let order = group.build()?.order();
        let (c0, c1) = random_pair(&mut rng)?;
        let (c0p, c1p) = random_pair(&mut rng)?;
        let spec = CodeSpec {
            a: (0..c0.n()).map(|_| rng.gen_range(0..order)).collect(),
            b: (0..c0p.n()).map(|_| rng.gen_range(0..order)).collect(),
            group,
            c0,
            c1,
            c0p,
            c1p,
            comment: (t % 3 == 0).then(|| format!("case {t}")),
        };
        let text = serialize_spec(&spec)?;
        let back = parse_spec(&text)?;
        spec_ok += usize::from(back == spec && serialize_spec(&back)? == text);
        hashes.insert(qtanner::io::spec_hash(&spec));
    }
    Ok(verdict(
        alist_ok == 1000 && spec_ok == 1000,
        format!("alist {alist_ok}/1000, spec {spec_ok}/1000 ({} distinct specs)", hashes.len()),
    ))
}

fn main() -> ExitCode {
    let wanted: BTreeSet<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let selected = |c: usize| wanted.is_empty() || wanted.contains(&c);
    let mut lemma: Option<qtanner::Result<LemmaRun>> = None;
    let mut failed = 0;
    for c in 1..=11 {
        if !selected(c) {
            continue;
        }
        let start = Instant::now();
        let outcome = match c {
            1..=3 => match lemma.get_or_insert_with(LemmaRun::new) {
                Ok(run) => Ok([c1, c2, c3][c - 1](run)),
                Err(e) => Ok(Fail(format!("corpus failed: {e}"))),
            },
            4 => c4(),
            5 => c5(),
            6 => c6(),
            7 => c7(),
            8 => c8(),
            9 => c9(),
            10 => c10(),
            _ => c11(),
        }
        .unwrap_or_else(|e| Fail(format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Inconclusive(d) => ("INCONCLUSIVE", d),
        };
        println!("criterion {c:>2}: {tag} ({secs:.1}s) {detail}");
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
