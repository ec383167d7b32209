use std::collections::BTreeMap;
use std::fs;

use qtanner::search::{
    load_records, rank_results, report_csv, run_search, verify_records, SearchConfig, SearchRecord, Status, CSV_HEADER,
};

fn config(dir: &std::path::Path, body: &str) -> SearchConfig {
    let mut cfg = SearchConfig::from_toml(body).unwrap();
    cfg.output = dir.join("out.jsonl");
    cfg
}

const TRIVIAL: &str = r#"
group = "cyclic(1)"
output = "unused.jsonl"
[a]
family = "rep2"
fixed = ["0", "0"]
[b]
family = "rep2"
fixed = ["0", "0"]
[distance]
trials = 100
"#;

const C3: &str = r#"
group = "cyclic(3)"
seed = 17
output = "unused.jsonl"
[a]
family = "ham6"
permutations = "all"
[b]
family = "rep2"
fixed = ["0", "1"]
[filter]
floor = FLOOR
trials = 60
[distance]
trials = 200
"#;

/// Records keyed by spec, without timing.
fn by_key(records: &[SearchRecord]) -> BTreeMap<String, SearchRecord> {
    records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.wall_ms = 0;
            (r.spec_key.clone(), r)
        })
        .collect()
}

#[test]
fn trivial_group_gives_one_small_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_search(&config(dir.path(), TRIVIAL)).unwrap();
    assert_eq!(out.records.len(), 1);
    let r = &out.records[0];
    assert_eq!((r.n, r.k, r.d, r.status), (4, Some(2), Some(2), Status::Estimated));
    assert_eq!(out.summary.best, Some((4, 2, 2)));
    assert!(verify_records(&out.records).is_empty());
    assert_eq!(load_records(dir.path().join("out.jsonl")).unwrap(), out.records);
}

#[test]
fn resume_completes_a_truncated_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), &C3.replace("FLOOR", "0"));
    let full = run_search(&cfg).unwrap();
    assert!(full.records.len() > 20);

    let text = fs::read_to_string(&cfg.output).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let half = lines.len() / 2;
    let mut cut: String = lines[..half].iter().map(|l| format!("{l}\n")).collect();
    cut.push_str(&lines[half][..lines[half].len() / 2]);
    fs::write(&cfg.output, cut).unwrap();

    let mut again = cfg.clone();
    again.resume = true;
    let resumed = run_search(&again).unwrap();
    assert_eq!(resumed.summary.resumed, half);
    assert_eq!(resumed.summary.processed, full.records.len() - half);
    assert_eq!(by_key(&resumed.records), by_key(&full.records));
    assert_eq!(by_key(&load_records(&cfg.output).unwrap()), by_key(&full.records));
}

#[test]
fn filter_only_removes_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let open = run_search(&config(dir.path(), &C3.replace("FLOOR", "0"))).unwrap();
    let strict = run_search(&config(dir.path(), &C3.replace("FLOOR", "4"))).unwrap();
    let open = by_key(&open.records);
    let strict = by_key(&strict.records);
    assert_eq!(open.len(), strict.len());
    let estimated = |m: &BTreeMap<String, SearchRecord>| {
        m.values().filter(|r| r.status == Status::Estimated).map(|r| r.spec_key.clone()).collect::<Vec<_>>()
    };
    let kept = estimated(&strict);
    assert!(kept.len() < estimated(&open).len());
    for key in kept {
        assert_eq!(strict[&key].d, open[&key].d, "{key}");
    }
}

#[test]
fn ranking_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_search(&config(dir.path(), &C3.replace("FLOOR", "0"))).unwrap();
    let rows = rank_results(&out.records);
    assert!(!rows.is_empty());
    for w in rows.windows(2) {
        assert!((w[0].d, w[0].k, std::cmp::Reverse(w[0].n)) >= (w[1].d, w[1].k, std::cmp::Reverse(w[1].n)));
    }
    let csv = report_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0].parse::<usize>().unwrap(), rows[0].n);
    let ratio = format!("{:.1}", (rows[0].d * rows[0].d) as f64 / rows[0].n as f64);
    assert_eq!(first[3], ratio);
}
