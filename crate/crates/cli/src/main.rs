use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mvdyn_core::corealg::correspondence_unitary;
use mvdyn_core::covering::separation_test;
use mvdyn_core::fockrep::{self, TruncatedRep};
use mvdyn_core::suite::{self, SuiteConfig};
use mvdyn_core::verdict;
use mvdyn_core::{builtin, random, CoreElement, CoveringSpace, CylinderSet, FiniteDynSys, IdealData, PointSet, TailGraph};

#[derive(Parser, Debug)]
#[command(name = "mvdyn", version, about = "Analyze finite multivariable dynamical systems and their C*-envelopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cylinder depth D for symbolic work.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,

    /// Fock truncation depth L.
    #[arg(long, global = true, default_value_t = 3)]
    fock_depth: usize,

    /// Window S for infinite-tail representations.
    #[arg(long, global = true, default_value_t = 2)]
    tail_window: usize,

    /// Depth K of the added tail for non-surjective systems.
    #[arg(long, global = true, default_value_t = 3)]
    tail_k: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest point count for exhaustive scans.
    #[arg(long, global = true, default_value_t = 3)]
    max_points: usize,

    /// Largest truncated Fock dimension.
    #[arg(long, global = true, default_value_t = fockrep::DEFAULT_MAX_DIM)]
    max_dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verdict, invariant-set lattices, range deficiency and tail graph.
    Analyze {
        /// System JSON file, or `builtin:NAME` for a shipped system.
        input: String,
    },
    /// Run the named check suites on a system, or the exhaustive scan.
    Check {
        input: Option<String>,
        /// Scan every system up to `--max-points` points instead.
        #[arg(long)]
        enumerate: bool,
        /// Number of maps for the scan.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Verdict/minimality equivalence scan over all small systems.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Refuse scans over more systems than this.
        #[arg(long, default_value_t = 100_000)]
        max_systems: usize,
    },
    /// Write the tail graph in DOT format.
    ExportDot {
        input: String,
        /// Output file; standard output when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Core-algebra demonstrations: Cuntz relations, V, α, ideal data.
    Algebra { input: String },
    /// Truncated Fock representations and their checks.
    Fock {
        input: String,
        /// Write the triplet dump of λ_x(s_1) for the first point here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<mvdyn_core::Error> for Failure {
    fn from(e: mvdyn_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(input: &str) -> Result<FiniteDynSys, Failure> {
    if let Some(name) = input.strip_prefix("builtin:") {
        return builtin::get(name).ok_or_else(|| {
            Failure::Input(format!("unknown shipped system {name:?}; known: {}", builtin::NAMES.join(", ")))
        });
    }
    let text = std::fs::read_to_string(input).map_err(|e| Failure::Input(format!("cannot read {input}: {e}")))?;
    FiniteDynSys::from_json(&text).map_err(|e| Failure::Input(format!("{input}: {e}")))
}

fn names<'a>(sys: &'a FiniteDynSys, set: &PointSet) -> Vec<&'a str> {
    set.iter().map(|&x| sys.point_name(x)).collect()
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Text => print!("{}", text()),
    }
}

fn analyze(cli: &Cli, input: &str) -> Result<(), Failure> {
    let sys = load(input)?;
    let v = verdict::verdict_with_depths(&sys, cli.depth, cli.tail_k)?;
    let guard = 20;
    let invariant = sys.invariant_sets(guard)?;
    let bi = sys.bi_invariant_sets(guard)?;
    let deficiency = sys.range_deficiency();
    let graph = TailGraph::new(&sys);
    let live = graph.live_vertices();
    let separation = sys.is_surjective().then(|| separation_test(&graph, &sys));
    let report = json!({
        "system": sys.name(),
        "points": sys.points(),
        "n": sys.n(),
        "verdict": v,
        "invariantSets": invariant.iter().map(|s| names(&sys, s)).collect::<Vec<_>>(),
        "biInvariantSets": bi.iter().map(|s| names(&sys, s)).collect::<Vec<_>>(),
        "rangeDeficiency": names(&sys, &deficiency.deficiency),
        "tailGraph": {
            "vertices": sys.m(),
            "edges": graph.edges().len(),
            "live": names(&sys, &live),
        },
        "separation": separation.as_ref().map(|s| json!({
            "separates": s.separates,
            "witness": s.witness.map(|(a, b)| [sys.point_name(a), sys.point_name(b)]),
        })),
    });
    emit(cli.format, &report, || {
        let fmt_sets = |sets: &[PointSet]| {
            sets.iter().map(|s| format!("{{{}}}", names(&sys, s).join(","))).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        out += &format!("system      {} (|X| = {}, n = {})\n", sys.name().unwrap_or("-"), sys.m(), sys.n());
        out += &format!("minimal     {}\nsurjective  {}\n", v.minimal, v.surjective);
        out += &format!("simplicity  {:?}\nO_n         {:?}\n", v.simplicity, v.on_detection);
        out += &format!("invariant   {}\nbi-invariant {}\n", fmt_sets(&invariant), fmt_sets(&bi));
        out += &format!("U           {{{}}}\n", names(&sys, &deficiency.deficiency).join(","));
        for line in &v.witnesses.reasoning {
            out += &format!("  - {line}\n");
        }
        if let Some(note) = &v.witnesses.peters_note {
            out += &format!("  note: {note}\n");
        }
        out
    });
    Ok(())
}

fn suite_config(cli: &Cli) -> SuiteConfig {
    SuiteConfig {
        depth: cli.depth,
        fock_depth: cli.fock_depth,
        tail_window: cli.tail_window,
        tail_k: cli.tail_k,
        seed: cli.seed,
        max_dim: cli.max_dim,
        ..SuiteConfig::default()
    }
}

fn scan(cli: &Cli, n: usize, max_systems: usize) -> Result<(), Failure> {
    let report = suite::enumeration_scan(cli.max_points, n, max_systems)?;
    let value = serde_json::to_value(&report).expect("serializable");
    emit(cli.format, &value, || {
        let mut out = String::new();
        for (m, count) in &report.by_size {
            out += &format!("|X| = {m}: {count} systems\n");
        }
        out += &format!("{} systems, {} minimal, {} simple\n", report.systems, report.minimal, report.simple);
        for f in &report.failures {
            out += &format!("FAIL  {f}\n");
        }
        for d in &report.on_disagreements {
            out += &format!("finding: O_n detected but not simple: {d}\n");
        }
        out += if report.passed() { "scan passed\n" } else { "scan FAILED\n" };
        out
    });
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} scan failures", report.failures.len())))
    }
}

fn check(cli: &Cli, input: Option<&str>, enumerate: bool, n: usize) -> Result<(), Failure> {
    if enumerate {
        return scan(cli, n, 100_000);
    }
    let input = input.ok_or_else(|| Failure::Input("check needs an input system or --enumerate".into()))?;
    let sys = load(input)?;
    let report = suite::run_suite(&sys, &suite_config(cli))?;
    emit(cli.format, &serde_json::to_value(&report).expect("serializable"), || report.to_text());
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(Failure::Check(format!("failed: {}", names.join("; "))))
    }
}

fn export_dot(input: &str, output: Option<&Path>) -> Result<(), Failure> {
    let sys = load(input)?;
    let dot = TailGraph::new(&sys).to_dot(&sys);
    match output {
        None => print!("{dot}"),
        Some(path) => {
            std::fs::write(path, dot).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?
        }
    }
    Ok(())
}

fn algebra(cli: &Cli, input: &str) -> Result<(), Failure> {
    let sys = load(input)?;
    let space = CoveringSpace::with_depth(&sys, cli.depth + 1);
    let n = sys.n();
    let one = CoreElement::one(&space);
    let mut cuntz = true;
    let mut sum = CoreElement::zero(&space);
    for i in 0..n {
        let ti = CoreElement::t(&space, i);
        sum = &sum + &(&ti * &ti.adjoint());
        for j in 0..n {
            let expected = if i == j { one.clone() } else { CoreElement::zero(&space) };
            cuntz &= &ti.adjoint() * &CoreElement::t(&space, j) == expected;
        }
    }
    let mut rng = random::rng(cli.seed);
    let sample = random::core(&space, 3, 2, 1, &mut rng);
    let v_part = match CoreElement::isometry_v(&space) {
        Ok(v) => json!({
            "VstarV": (&v.adjoint() * &v).to_json(),
            "alphaOfOne": one.alpha()?.to_json(),
        }),
        Err(e) => json!({ "skipped": e.to_string() }),
    };
    let mut ideals = Vec::new();
    for a in sys.invariant_sets(20)? {
        let data = IdealData::from_set(&CylinderSet::point_preimage(&space, &a, 0));
        ideals.push(json!({ "set": names(&sys, &a), "ideal": data.summary() }));
    }
    let correspondence = if sys.is_surjective() && cli.depth < space.max_depth() {
        Some(correspondence_unitary(&space, cli.depth.min(2))?)
    } else {
        None
    };
    let report = json!({
        "system": sys.name(),
        "coveringDepth": space.max_depth(),
        "cylinders": (0..=space.max_depth()).map(|d| space.count(d)).collect::<Vec<_>>(),
        "cuntzIsometries": cuntz,
        "rangesSumToOne": sum == one,
        "V": v_part,
        "sample": { "seed": cli.seed, "element": sample.to_json(), "gaugeExpectation": sample.gauge_expect().to_json() },
        "idealsOfInvariantSets": ideals,
        "correspondence": correspondence,
    });
    emit(cli.format, &report, || {
        let mut out = format!("system {}\n", sys.name().unwrap_or("-"));
        out += &format!("cylinder counts {:?}\n", (0..=space.max_depth()).map(|d| space.count(d)).collect::<Vec<_>>());
        out += &format!("t_i* t_j = δ_ij: {cuntz}\nΣ t_i t_i* = 1: {}\n", sum == one);
        for entry in report["idealsOfInvariantSets"].as_array().expect("array") {
            out += &format!("invariant {} → {}\n", entry["set"], entry["ideal"]);
        }
        out
    });
    Ok(())
}

fn fock(cli: &Cli, input: &str, dump: Option<&Path>) -> Result<(), Failure> {
    let sys = load(input)?;
    let l = cli.fock_depth;
    let mut points = Vec::new();
    let mut pass = true;
    for x in 0..sys.m() {
        let rep = TruncatedRep::orbit_with_guard(&sys, x, l, cli.max_dim)?;
        let cov = fockrep::check_covariance(&rep, &rep.spanning_functions());
        let iso = fockrep::check_row_isometry(&rep);
        pass &= cov.pass && iso.pass;
        if x == 0 {
            if let Some(path) = dump {
                std::fs::write(path, rep.shift(0).to_triplets())
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        points.push(json!({
            "point": sys.point_name(x),
            "dimension": rep.dim(),
            "maximal": fockrep::maximality_flag(&sys, x),
            "reports": [cov, iso],
        }));
    }
    let mut extra: BTreeMap<&str, Value> = BTreeMap::new();
    if sys.is_surjective() {
        let space = CoveringSpace::with_depth(&sys, cli.depth + 1);
        let mut tails = Vec::new();
        for q in fockrep::covering_points(&space, 3) {
            let rep = TruncatedRep::tail_with_guard(&sys, &q.cylinder(cli.tail_window), l, cli.max_dim)?;
            let c = fockrep::check_cuntz_completeness(&rep)?;
            let w = fockrep::check_window_coherence(&rep, &rep.spanning_functions())?;
            let r = fockrep::check_rho_intertwine(&space, q.base(), &q, l)?;
            pass &= c.pass && w.pass && r.pass;
            tails.push(json!({ "tail": q.describe(&sys), "reports": [c, w, r] }));
        }
        extra.insert("tails", Value::Array(tails));
    } else {
        let tailed = sys.add_tail(cli.tail_k)?;
        let mut mult = Vec::new();
        for &u in &sys.range_deficiency().deficiency {
            for k in 0..=cli.tail_k.min(l.saturating_sub(1)) {
                let r = fockrep::tail_multiplicity(&tailed, u, k, l)?;
                pass &= r.pass;
                mult.push(r);
            }
        }
        extra.insert("tailMultiplicity", serde_json::to_value(mult).expect("serializable"));
    }
    let report = json!({ "system": sys.name(), "fockDepth": l, "points": points, "extra": extra, "pass": pass });
    emit(cli.format, &report, || {
        let mut out = format!("system {} at Fock depth {l}\n", sys.name().unwrap_or("-"));
        for p in &points {
            out += &format!("point {} (maximal: {})\n", p["point"], p["maximal"]);
            for r in p["reports"].as_array().expect("array") {
                out += &format!("  {} {}: max deviation {}\n", if r["pass"] == true { "PASS" } else { "FAIL" }, r["check"], r["maxDeviation"]);
            }
        }
        out += if pass { "all representation checks pass\n" } else { "representation checks FAILED\n" };
        out
    });
    if pass {
        Ok(())
    } else {
        Err(Failure::Check("representation checks failed".into()))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze { input } => analyze(cli, input),
        Command::Check { input, enumerate, n } => check(cli, input.as_deref(), *enumerate, *n),
        Command::Enumerate { n, max_systems } => scan(cli, *n, *max_systems),
        Command::ExportDot { input, output } => export_dot(input, output.as_deref()),
        Command::Algebra { input } => algebra(cli, input),
        Command::Fock { input, dump } => fock(cli, input, dump.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
