use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hstar::ehrhart::h_star;
use hstar::harness::{corpus_verify, jsonl, reproduction, CorpusConfig};
use hstar::io::{parse, PolytopeFile};
use hstar::monoid::is_idp;
use hstar::oracle::{h_star_by_box_scan, idp_by_compositions};
use hstar::polytope::Polytope;
use hstar::report::{Report, Selection};
use hstar::Error;

#[derive(Parser)]
#[command(name = "hstar", version, about = "Exact Ehrhart invariants of lattice polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute invariants of one polytope and print a JSON report.
    Invariants(InvariantsArgs),
    /// Generate a random corpus, check every member and write a JSONL stream.
    Corpus(CorpusArgs),
    /// Compare a fast path against a brute-force recomputation.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct InvariantsArgs {
    /// Polytope file, text or JSON.
    path: PathBuf,
    #[arg(long)]
    hstar: bool,
    #[arg(long)]
    idp: bool,
    /// Module generator counts by degree.
    #[arg(long)]
    generators: bool,
    #[arg(long)]
    spanning: bool,
    #[arg(long)]
    level: bool,
    /// Graded Betti numbers β_{p,j} for p ≤ P_MAX, j ≤ J_MAX.
    #[arg(long, num_args = 2, value_names = ["P_MAX", "J_MAX"])]
    betti: Option<Vec<usize>>,
    /// Minimal toric ideal generators by degree, up to J_MAX.
    #[arg(long, value_name = "J_MAX")]
    toric: Option<usize>,
    #[arg(long)]
    implications: bool,
    /// Everything except Betti numbers and toric generators.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct CorpusArgs {
    /// TOML or JSON config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
    /// Fixes both ends of the dimension range.
    #[arg(long, conflicts_with_all = ["dim_min", "dim_max"])]
    dim: Option<usize>,
    #[arg(long)]
    dim_min: Option<usize>,
    #[arg(long)]
    dim_max: Option<usize>,
    /// Bound on the diagonal of the random edge matrices.
    #[arg(long)]
    bound: Option<i64>,
    /// Keep only polytopes of this degree.
    #[arg(long, conflicts_with_all = ["degree_min", "degree_max"])]
    degree: Option<usize>,
    #[arg(long)]
    degree_min: Option<usize>,
    #[arg(long)]
    degree_max: Option<usize>,
    #[arg(long)]
    non_simplex_percent: Option<u32>,
    #[arg(long)]
    budget: Option<usize>,
    /// Add the built-in reference examples and check their known properties.
    #[arg(long, alias = "paper-examples")]
    reference_examples: bool,
    /// JSONL output; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary output; defaults to `<out>.summary.json`, or standard error
    /// when the stream goes to standard output.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    path: PathBuf,
    #[arg(long, value_enum)]
    mode: OracleMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Hstar,
    Idp,
}

/// A failed command: exit status and message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded(_) => 3,
            Error::Internal(_) => 1,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Invariants(a) => invariants(a),
        Command::Corpus(a) => corpus(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<(PolytopeFile, Polytope), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let file = parse(&text).map_err(|e| {
        Failure::new(2, format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message))
    })?;
    let polytope = file.polytope()?;
    Ok((file, polytope))
}

fn print_json(value: &impl serde::Serialize, pretty: bool) -> Result<(), Failure> {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| Failure::new(1, e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn invariants(a: InvariantsArgs) -> CmdResult {
    let (file, p) = load(&a.path)?;
    let mut sel = if a.all { Selection::all() } else { Selection::default() };
    sel.hstar |= a.hstar;
    sel.idp |= a.idp;
    sel.generators |= a.generators;
    sel.spanning |= a.spanning;
    sel.level |= a.level;
    sel.implications |= a.implications;
    sel.betti = a.betti.map(|v| (v[0], v[1]));
    sel.toric = a.toric;
    let report = Report::compute(file.name.clone(), &p, &sel)?;
    print_json(&report, a.pretty)?;
    Ok(0)
}

fn corpus_config(a: &CorpusArgs) -> Result<CorpusConfig, Failure> {
    let mut c = match &a.config {
        None => CorpusConfig::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
            let parsed = if path.extension().is_some_and(|e| e == "json") {
                serde_json::from_str(&text).map_err(|e| e.to_string())
            } else {
                toml::from_str(&text).map_err(|e| e.to_string())
            };
            parsed.map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?
        }
    };
    if let Some(v) = a.seed {
        c.seed = v;
    }
    if let Some(v) = a.count {
        c.count = v;
    }
    if let Some(v) = a.dim {
        c.dim_min = v;
        c.dim_max = v;
    }
    if let Some(v) = a.dim_min {
        c.dim_min = v;
    }
    if let Some(v) = a.dim_max {
        c.dim_max = v;
    }
    if let Some(v) = a.bound {
        c.entry_bound = v;
    }
    if let Some(v) = a.degree {
        c.degree_min = Some(v);
        c.degree_max = Some(v);
    }
    if a.degree_min.is_some() {
        c.degree_min = a.degree_min;
    }
    if a.degree_max.is_some() {
        c.degree_max = a.degree_max;
    }
    if let Some(v) = a.non_simplex_percent {
        c.non_simplex_percent = v;
    }
    if a.budget.is_some() {
        c.budget = a.budget;
    }
    c.reference_examples |= a.reference_examples;
    Ok(c)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn corpus(a: CorpusArgs) -> CmdResult {
    let config = corpus_config(&a)?;
    let run = corpus_verify(&config)?;
    let stream = jsonl(&run.records);
    let summary = serde_json::to_string_pretty(&run.summary).map_err(|e| Failure::new(1, e.to_string()))?;
    match &a.out {
        Some(path) => write_file(path, &stream)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(stream.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::new(1, e.to_string()))?;
        }
    }
    let summary_path = a.summary.clone().or_else(|| {
        a.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".summary.json");
            PathBuf::from(s)
        })
    });
    match summary_path {
        Some(path) => write_file(&path, &format!("{summary}\n"))?,
        None => eprintln!("{summary}"),
    }
    let violating: Vec<_> = run.violating().collect();
    if violating.is_empty() {
        return Ok(0);
    }
    for r in &violating {
        let checks: Vec<&str> = r.violations.iter().map(|v| v.check.as_str()).collect();
        eprintln!("violation in {} ({}):", r.report.name.as_deref().unwrap_or("?"), checks.join(", "));
        eprint!("{}", reproduction(r));
    }
    Ok(1)
}

fn oracle(a: OracleArgs) -> CmdResult {
    let (_, p) = load(&a.path)?;
    // the brute-force side runs first: it is the one that refuses large inputs
    let (mode, oracle, fast) = match a.mode {
        OracleMode::Hstar => {
            let slow = h_star_by_box_scan(&p)?;
            let fast = h_star(&p)?;
            ("hstar", json!(slow.entries()), json!(fast.entries()))
        }
        OracleMode::Idp => {
            let slow = idp_by_compositions(&p)?;
            let fast = is_idp(&p)?.value;
            ("idp", json!(slow), json!(fast))
        }
    };
    let equal = oracle == fast;
    print_json(&json!({ "mode": mode, "fast": fast, "oracle": oracle, "match": equal }), false)?;
    if equal {
        Ok(0)
    } else {
        eprintln!("mismatch: fast path {fast}, oracle {oracle}");
        Ok(1)
    }
}
