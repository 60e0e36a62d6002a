use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;
use serde_json::json;
use unisym::bench::bench_pfaffian;
use unisym::pfaffian::SkewMatrix;
use unisym::sections::gamma_section;
use unisym::verify::{run_suite, Suite};
use unisym::{gamma_map, seeded_rng, Field, SkewPlusMatrix};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "unisym", version, about = "Exact checks for Pfaffians, symplectic sections and the map gamma")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized property suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Evaluate one serialized matrix.
    Compute {
        what: ComputeKind,
        #[arg(long)]
        input: PathBuf,
        /// Ambient dimension 2n for `section` (default: smallest even >= q).
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Time the recursive and elimination Pfaffians.
    Bench {
        what: BenchKind,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SeedArg {
    /// Integer seed, or `random` for fresh entropy.
    #[arg(long, env = "UNISYM_SEED")]
    seed: Option<String>,
}

impl SeedArg {
    fn resolve(&self) -> Result<u64, String> {
        match self.seed.as_deref() {
            None => Ok(DEFAULT_SEED),
            Some("random") => Ok(rand::thread_rng().next_u64()),
            Some(s) => s.parse().map_err(|_| format!("bad seed {s:?}: expected an integer or `random`")),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    suite: SuiteGroup,
    /// q, fp:P or fpt:P
    #[arg(long, default_value = "q")]
    field: String,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Size bound of the sampling pool.
    #[arg(long, default_value_t = 1000)]
    bound: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteGroup {
    Pfaffian,
    Sections,
    Witt,
    Complexes,
    Appendix,
    GammaOracle,
    Units,
    Sm,
    All,
}

impl SuiteGroup {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteGroup::Pfaffian => vec![Suite::Pfaffian, Suite::DressWenzel],
            SuiteGroup::Sections => vec![Suite::Sections],
            SuiteGroup::Witt => vec![Suite::Witt],
            SuiteGroup::Complexes => vec![Suite::Complexes],
            SuiteGroup::Appendix => vec![Suite::AppendixA1, Suite::AppendixA2, Suite::AppendixA3, Suite::Relation],
            SuiteGroup::GammaOracle => vec![Suite::GammaOracle],
            SuiteGroup::Units => vec![Suite::Units],
            SuiteGroup::Sm => vec![Suite::Sm],
            SuiteGroup::All => Suite::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ComputeKind {
    Pf,
    Gamma,
    Section,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchKind {
    Pfaffian,
}

enum Failure {
    Checks,
    Usage(String),
}

impl From<unisym::Error> for Failure {
    fn from(e: unisym::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Each suite draws from its own stream so single-suite runs reproduce
/// the corresponding part of `verify all`.
fn suite_seed(seed: u64, suite: Suite) -> u64 {
    let index = Suite::ALL.iter().position(|&s| s == suite).expect("listed") as u64;
    seed.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let field: Field = args.field.parse()?;
    let seed = args.seed.resolve().map_err(Failure::Usage)?;
    let suites = args.suite.suites();
    for s in &suites {
        s.check_field(field)?;
    }
    let mut reports = Vec::new();
    for s in suites {
        let mut rng = seeded_rng(suite_seed(seed, s));
        let r = run_suite(s, field, args.trials, args.bound, &mut rng)?;
        eprintln!(
            "{:<14} {}  {} assertions, {} failures, {} ms",
            r.check,
            if r.passed() { "PASS" } else { "FAIL" },
            r.assertions,
            r.failure_count,
            r.elapsed_ms
        );
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed());
    let doc = json!({
        "seed": seed,
        "field": field,
        "trials": args.trials,
        "bound": args.bound,
        "passed": passed,
        "reports": reports,
    });
    let text = serde_json::to_string_pretty(&doc).expect("report serializes");
    match &args.output {
        Some(path) => fs::write(path, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn compute(what: ComputeKind, input: &Path, dim: Option<usize>) -> Result<(), Failure> {
    let text = read(input)?;
    match what {
        ComputeKind::Pf => {
            let a = SkewMatrix::from_json(&text)?;
            println!("{}", a.pf()?);
        }
        ComputeKind::Gamma => {
            let a = SkewPlusMatrix::from_json(&text)?;
            let g = gamma_map(&a)?;
            println!("{}", serde_json::to_string_pretty(&g).expect("formal sum serializes"));
        }
        ComputeKind::Section => {
            let a = SkewPlusMatrix::from_json(&text)?;
            let q = a.size();
            let v = gamma_section(q, dim.unwrap_or(q + q % 2), &a)?;
            println!("{}", serde_json::to_string_pretty(&v).expect("sequence serializes"));
        }
    }
    Ok(())
}

fn bench(max_n: usize, seed: &SeedArg, as_json: bool) -> Result<(), Failure> {
    if max_n == 0 {
        return Err(Failure::Usage("--max-n must be at least 1".into()));
    }
    let seed = seed.resolve().map_err(Failure::Usage)?;
    let report = bench_pfaffian(max_n, 1000, &mut seeded_rng(seed))?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report).expect("bench serializes"));
    } else {
        print!("{}", report.table());
    }
    if report.all_agree() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Compute { what, input, dim } => compute(*what, input, *dim),
        Command::Bench { what: BenchKind::Pfaffian, max_n, seed, json } => bench(*max_n, seed, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
