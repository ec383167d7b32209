use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qtanner::code::{build_lifted_in, theorem1_dimension_in, theorem1_eligible, CssCode, QubitLayout};
use qtanner::distance::{
    brute_force_css_distance, estimate_css_distance, verify_css_witness, Depth, EstimatorOptions, Side,
    DEFAULT_BRUTE_FORCE_LIMIT,
};
use qtanner::io::{
    atomic_write, export_alist, export_matrixmarket, import_alist, load_spec, parse_spec_unchecked, serialize_spec,
    spec_hash,
};
use qtanner::search::{rank_results, report_csv, report_table, run_search, verify_records, SearchConfig};
use qtanner::verify::{check_lemma_case, lemma_corpus, verify_theorem1};
use qtanner::{CodeSpec, Error};

#[derive(Parser)]
#[command(name = "qtanner", version, about = "Build, check and search quantum Tanner codes")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "QTANNER_THREADS")]
    threads: Option<usize>,
    /// Log progress to stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    X,
    Z,
    Both,
}

impl SideArg {
    fn sides(self) -> &'static [Side] {
        match self {
            SideArg::X => &[Side::X],
            SideArg::Z => &[Side::Z],
            SideArg::Both => &[Side::X, Side::Z],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Alist,
    Mtx,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Write Hx and Hz of the lifted code as alist files plus a metadata sidecar.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a spec (or an imported Hx/Hz pair) for every structural invariant.
    Check {
        #[arg(long, required_unless_present = "hx")]
        spec: Option<PathBuf>,
        #[arg(long, requires = "hz", conflicts_with = "spec")]
        hx: Option<PathBuf>,
        #[arg(long, requires = "hx")]
        hz: Option<PathBuf>,
    },
    /// Exact dimension of the lifted code.
    Dim {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Randomized upper bound on the distance, with a verified witness.
    Distance {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop once the bound is at most this value.
        #[arg(long)]
        early_exit: Option<usize>,
        /// Also combine pairs of basis rows in every trial.
        #[arg(long)]
        pairs: bool,
        /// Compute the exact distance by enumeration (small codes only).
        #[arg(long)]
        exact: bool,
    },
    /// Run a parameter search described by a TOML config.
    Search {
        #[arg(long)]
        config: PathBuf,
        /// Continue from an existing results file.
        #[arg(long)]
        resume: bool,
        /// Results file (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the closed-form base-code dimension, distance and logical basis.
    VerifyLemma {
        /// Number of random custom local-code cases added to the 900 [6,3,3] pairs.
        #[arg(long, default_value_t = 200)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest base code whose distance is computed by enumeration.
        #[arg(long, default_value_t = 24)]
        distance_limit: usize,
    },
    /// Check the dimension of lifts with B = (0, 1) over cyclic groups.
    VerifyTheorem {
        #[arg(long, default_value_t = 2)]
        m_min: usize,
        #[arg(long, default_value_t = 12)]
        m_max: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export Hx and Hz in alist and/or MatrixMarket format.
    Export {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        format: Format,
    },
    /// Import an Hx/Hz alist pair and report CSS validity, n and k.
    ImportCheck {
        #[arg(long)]
        hx: PathBuf,
        #[arg(long)]
        hz: PathBuf,
        /// Also estimate the distance with this many trials.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Core(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) | Failure::Core(Error::Integrity(_)) => 2,
            Failure::Core(Error::Io(_)) => 3,
            Failure::Core(_) => 1,
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(t) = cli.threads.filter(|&t| t > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            log::warn!("thread pool already initialized: {e}");
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Build { spec, out } => build(&spec, &out),
        Command::Check { spec, hx, hz } => match (spec, hx, hz) {
            (Some(spec), _, _) => check_spec(&spec),
            (None, Some(hx), Some(hz)) => import_check(&hx, &hz, None, 0),
            _ => Err(Error::Input("give --spec or both --hx and --hz".into()).into()),
        },
        Command::Dim { spec } => dim(&spec),
        Command::Distance {
            spec,
            side,
            trials,
            seed,
            early_exit,
            pairs,
            exact,
        } => {
            let depth = if pairs { Depth::Two } else { Depth::One };
            let opts = EstimatorOptions::new(trials, seed).with_depth(depth).with_early_exit(early_exit);
            distance(&spec, side, &opts, exact)
        }
        Command::Search { config, resume, out } => search(&config, resume, out),
        Command::VerifyLemma {
            random,
            seed,
            distance_limit,
        } => verify_lemma(random, seed, distance_limit),
        Command::VerifyTheorem {
            m_min,
            m_max,
            samples,
            seed,
        } => {
            let report = verify_theorem1(m_min..=m_max, samples, seed)?;
            println!("{} lifts checked over cyclic groups {m_min}..={m_max}", report.checked);
            println!("{} violations", report.violations.len());
            match report.violations.first() {
                None => Ok(()),
                Some(v) => Err(Failure::Verification(format!("counterexample: {v}"))),
            }
        }
        Command::Export { spec, out, format } => export(&spec, &out, format),
        Command::ImportCheck { hx, hz, trials, seed } => import_check(&hx, &hz, trials, seed),
    }
}

fn lifted(spec_path: &Path) -> Result<(CodeSpec, CssCode), Failure> {
    let spec = load_spec(spec_path)?;
    let group = spec.validate()?;
    let code = build_lifted_in(&spec, &group)?;
    Ok((spec, code))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_meta(prefix: &Path, spec: &CodeSpec, code: &CssCode) -> Result<PathBuf, Failure> {
    let layout = code.layout();
    let meta = serde_json::json!({
        "n": code.n(),
        "hx_rows": code.hx().rows(),
        "hz_rows": code.hz().rows(),
        "convention": QubitLayout::CONVENTION,
        "n_a": layout.map(|l| l.n_a),
        "n_b": layout.map(|l| l.n_b),
        "group_order": layout.map(|l| l.group_order),
        "spec_key": spec.key(),
        "spec_sha256": spec_hash(spec),
        "spec": serialize_spec(spec)?,
    });
    let path = with_suffix(prefix, ".meta.json");
    let text = serde_json::to_string_pretty(&meta).map_err(|e| Error::Input(e.to_string()))?;
    atomic_write(&path, text.as_bytes())?;
    Ok(path)
}

fn build(spec_path: &Path, out: &Path) -> CliResult {
    let (spec, code) = lifted(spec_path)?;
    let hx = with_suffix(out, ".hx.alist");
    let hz = with_suffix(out, ".hz.alist");
    export_alist(code.hx(), &hx)?;
    export_alist(code.hz(), &hz)?;
    let meta = write_meta(out, &spec, &code)?;
    println!("n = {}", code.n());
    println!("Hx: {} x {} -> {}", code.hx().rows(), code.hx().cols(), hx.display());
    println!("Hz: {} x {} -> {}", code.hz().rows(), code.hz().cols(), hz.display());
    println!("metadata -> {}", meta.display());
    Ok(())
}

fn export(spec_path: &Path, out: &Path, format: Format) -> CliResult {
    let (spec, code) = lifted(spec_path)?;
    for (name, m) in [("hx", code.hx()), ("hz", code.hz())] {
        if matches!(format, Format::Alist | Format::All) {
            let p = with_suffix(out, &format!(".{name}.alist"));
            export_alist(m, &p)?;
            println!("{}", p.display());
        }
        if matches!(format, Format::Mtx | Format::All) {
            let p = with_suffix(out, &format!(".{name}.mtx"));
            export_matrixmarket(m, &p)?;
            println!("{}", p.display());
        }
    }
    println!("{}", write_meta(out, &spec, &code)?.display());
    Ok(())
}

fn check_spec(spec_path: &Path) -> CliResult {
    let text = qtanner::io::read_text(spec_path)?;
    let spec = parse_spec_unchecked(&text)?;
    let mut failed = Vec::new();
    let mut report = |name: &str, r: Result<(), String>| {
        match &r {
            Ok(()) => println!("ok    {name}"),
            Err(msg) => {
                println!("FAIL  {name}: {msg}");
                failed.push(name.to_string());
            }
        }
    };
    let group = spec.group.build();
    report("group table is a group", group.as_ref().map(|_| ()).map_err(|e| e.to_string()));
    let Ok(group) = group else {
        return Err(Failure::Verification(format!("violated: {}", failed.join(", "))));
    };
    report("multisets match local-code lengths and group", spec.validate_with(&group).map_err(|e| e.to_string()));
    for (name, c) in [("c0", &spec.c0), ("c1", &spec.c1), ("c0p", &spec.c0p), ("c1p", &spec.c1p)] {
        report(&format!("local code {name}: H·Gᵀ = 0 and rowspace(G) = ker(H)"), c.validate().map_err(|e| e.to_string()));
    }
    if let Ok(code) = build_lifted_in(&spec, &group) {
        println!("n = {}", code.n());
        report("Hx·Hzᵀ = 0", code.check_orthogonality().map_err(|e| e.to_string()));
    } else {
        report("lifted code builds", Err("construction failed".into()));
    }
    if failed.is_empty() {
        println!("all invariants hold");
        Ok(())
    } else {
        Err(Failure::Verification(format!("violated: {}", failed.join(", "))))
    }
}

fn dim(spec_path: &Path) -> CliResult {
    let spec = load_spec(spec_path)?;
    let group = spec.validate()?;
    let code = build_lifted_in(&spec, &group)?;
    let exact = code.dimension()?;
    println!("n = {}", code.n());
    match theorem1_eligible(&spec, &group) {
        Ok(()) => {
            let fast = theorem1_dimension_in(&spec, &group)?;
            if fast != exact {
                return Err(Failure::Verification(format!("fast path gives k = {fast}, rank gives k = {exact}")));
            }
            println!("k = {fast} (theorem1 fast path, audited)");
        }
        Err(reason) => {
            println!("k = {exact} (rank)");
            log::info!("fast path not applicable: {reason}");
        }
    }
    Ok(())
}

fn distance(spec_path: &Path, side: SideArg, opts: &EstimatorOptions, exact: bool) -> CliResult {
    let (_, code) = lifted(spec_path)?;
    report_distance(&code, side, opts, exact)
}

fn report_distance(code: &CssCode, side: SideArg, opts: &EstimatorOptions, exact: bool) -> CliResult {
    println!("n = {}", code.n());
    for &s in side.sides() {
        let name = match s {
            Side::X => "X",
            Side::Z => "Z",
        };
        if exact {
            let d = brute_force_css_distance(code, s, DEFAULT_BRUTE_FORCE_LIMIT)?;
            println!("{name}: d = {d} (exact)");
            continue;
        }
        match estimate_css_distance(code, s, opts)? {
            None => println!("{name}: no logical operators"),
            Some(est) => {
                if !verify_css_witness(code, &est) {
                    return Err(Failure::Verification(format!("{name} witness does not re-verify")));
                }
                let support: Vec<String> = est.witness.support().iter().map(usize::to_string).collect();
                println!("{name}: d ≤ {}, witness verified", est.upper_bound);
                println!(
                    "  trials {}/{}, seed {}, depth {}, early exit {}, stopped early {}",
                    est.trials_run,
                    est.trials_requested,
                    est.seed,
                    format!("{:?}", est.depth).to_lowercase(),
                    est.early_exit.map_or("none".to_string(), |t| t.to_string()),
                    est.stopped_early
                );
                println!("  witness support: {}", support.join(" "));
            }
        }
    }
    Ok(())
}

fn search(config: &Path, resume: bool, out: Option<PathBuf>) -> CliResult {
    let mut cfg = SearchConfig::load(config)?;
    cfg.resume |= resume;
    if let Some(out) = out {
        cfg.output = out;
    }
    eprintln!("search: {} -> {}", config.display(), cfg.output.display());
    let outcome = run_search(&cfg)?;
    let problems = verify_records(&outcome.records);
    let rows = rank_results(&outcome.records);
    let csv_path = cfg.output.with_extension("csv");
    let table_path = cfg.output.with_extension("txt");
    atomic_write(&csv_path, report_csv(&rows).as_bytes())?;
    let mut table = report_table(&rows);
    let _ = write!(table, "\n{}\n", outcome.summary);
    atomic_write(&table_path, table.as_bytes())?;
    print!("{}", report_table(&rows[..rows.len().min(20)]));
    eprintln!("{}", outcome.summary);
    eprintln!("report -> {}, {}", csv_path.display(), table_path.display());
    if let Some(p) = problems.first() {
        return Err(Failure::Verification(format!("{} records failed re-verification; first: {p}", problems.len())));
    }
    Ok(())
}

fn verify_lemma(random: usize, seed: u64, limit: usize) -> CliResult {
    let corpus = lemma_corpus(random, seed)?;
    let (mut dim_ok, mut sym_ok) = (0, 0);
    let (mut checked, mut four_way_ok, mut family_ok) = (0, 0, 0);
    let mut failures = Vec::new();
    let mut four_way_counterexamples = Vec::new();
    for case in &corpus {
        let c = check_lemma_case(case, limit)?;
        if c.dimension_holds() {
            dim_ok += 1;
        } else {
            failures.push(format!("{}: formula k = {}, rank k = {}", case.label, c.k_formula, c.k_rank));
        }
        if c.symplectic_violations.is_empty() {
            sym_ok += 1;
        } else {
            failures.push(format!("{}: {}", case.label, c.symplectic_violations.join("; ")));
        }
        if let Some(exact) = c.d_exact {
            checked += 1;
            if c.d_four_way == exact {
                four_way_ok += 1;
            } else {
                four_way_counterexamples.push(format!("{}: exact d = {exact}, four-way min = {}", case.label, c.d_four_way));
            }
            if c.d_family == exact {
                family_ok += 1;
            } else {
                failures.push(format!("{}: exact d = {exact}, formula d = {}", case.label, c.d_family));
            }
        }
    }
    let total = corpus.len();
    println!("{dim_ok}/{total} dimension identities hold");
    println!("{sym_ok}/{total} symplectic bases valid");
    println!("{family_ok}/{checked} distance identities hold (intersection codes of families carrying logicals)");
    println!("{four_way_ok}/{checked} match min(d01, d01', d01⊥, d01'⊥) over all four codes");
    for c in four_way_counterexamples.iter().take(5) {
        println!("  four-way mismatch: {c}");
    }
    match failures.first() {
        None => Ok(()),
        Some(f) => {
            for case in corpus.iter().filter(|c| f.starts_with(&c.label)).take(1) {
                for (name, code) in [("c0", &case.c0), ("c1", &case.c1), ("c0p", &case.c0p), ("c1p", &case.c1p)] {
                    eprintln!("{name}: H = {:?}, G = {:?}", rows(code.h()), rows(code.g()));
                }
            }
            Err(Failure::Verification(format!("{} failures; first: {f}", failures.len())))
        }
    }
}

fn rows(m: &qtanner::BitMatrix) -> Vec<String> {
    m.row_iter().map(|r| r.to_string()).collect()
}

fn import_check(hx: &Path, hz: &Path, trials: Option<usize>, seed: u64) -> CliResult {
    let hx = import_alist(hx)?;
    let hz = import_alist(hz)?;
    if hx.cols() != hz.cols() {
        println!("FAIL  column counts agree: Hx has {}, Hz has {}", hx.cols(), hz.cols());
        return Err(Failure::Verification("Hx and Hz have different lengths".into()));
    }
    let code = CssCode::new(hx, hz)?;
    println!("n = {}", code.n());
    if let Err(e) = code.check_orthogonality() {
        println!("FAIL  Hx·Hzᵀ = 0: {e}");
        return Err(Failure::Verification("not a valid CSS code".into()));
    }
    println!("ok    Hx·Hzᵀ = 0");
    println!("k = {} (rank)", code.dimension()?);
    if let Some(trials) = trials {
        report_distance(&code, SideArg::Both, &EstimatorOptions::new(trials, seed), false)?;
    }
    Ok(())
}
