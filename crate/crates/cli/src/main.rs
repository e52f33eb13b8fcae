use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use rainbow_core::generators::LatinSquare;
use rainbow_core::oracle::{self, VerificationVerdict};
use rainbow_core::pipeline::{self, PipelineParams};
use rainbow_core::{rcol, sampling, FamilyRegistry, GenRequest, ProperEdgeColouring, Vertex};

#[derive(Parser)]
#[command(name = "rainbow", version, about = "Long rainbow cycles in properly edge-coloured complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a proper edge colouring in rcol format.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        latin_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline and print the run report.
    FindCycle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        resample: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a witness (JSON vertex array, or array of arrays for forests).
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, value_enum)]
        kind: WitnessKind,
    },
    /// Sample colours with probability p and measure expansion.
    ExpanderStats {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        set_size: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0.15)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact search on small instances.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        question: Question,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Pipeline over a grid of sizes and seeds, written as CSV.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Seeds 1..=K.
        #[arg(long)]
        seeds: u64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    Cycle,
    Path,
    Forest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Question {
    HamPath,
    LongestCycle,
    Forest,
}

struct Failure {
    code: &'static str,
    detail: String,
}

impl From<rainbow_core::Error> for Failure {
    fn from(e: rainbow_core::Error) -> Self {
        Failure { code: e.code(), detail: e.to_string() }
    }
}

fn fail(code: &'static str, detail: impl ToString) -> Failure {
    Failure { code, detail: detail.to_string() }
}

type Outcome = Result<ExitCode, Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ProperEdgeColouring, Failure> {
    Ok(rcol::parse(&read_text(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| fail("io", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| fail("json", e))
}

fn exit_if(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn gen(family: &str, n: usize, latin_file: Option<&Path>, seed: u64, out: Option<&Path>) -> Outcome {
    let latin = match latin_file {
        Some(path) => Some(LatinSquare::parse(&read_text(path)?)?),
        None => None,
    };
    let request = GenRequest { n, seed, latin };
    let colouring = FamilyRegistry::builtin().generate(family, &request)?;
    emit(out, &rcol::serialize(&colouring))?;
    Ok(ExitCode::SUCCESS)
}

fn find_cycle(input: &Path, params: PipelineParams, json: Option<&Path>) -> Outcome {
    let colouring = load(input)?;
    let report = pipeline::run(&colouring, &params)?;
    emit(json, &to_json(&report)?)?;
    Ok(if report.rainbow_verified {
        ExitCode::SUCCESS
    } else if report.has_cycle() {
        ExitCode::from(1)
    } else {
        ExitCode::from(2)
    })
}

fn verify(input: &Path, witness: &Path, kind: WitnessKind) -> Outcome {
    let colouring = load(input)?;
    let text = read_text(witness)?;
    let bad = |e: serde_json::Error| fail("witness", format!("{}: {e}", witness.display()));
    let verdict: VerificationVerdict = match kind {
        WitnessKind::Forest => {
            let paths: Vec<Vec<Vertex>> = serde_json::from_str(&text).map_err(bad)?;
            oracle::verify_forest(&colouring, &paths)
        }
        WitnessKind::Cycle => oracle::verify_rainbow_cycle(&colouring, &serde_json::from_str::<Vec<Vertex>>(&text).map_err(bad)?),
        WitnessKind::Path => oracle::verify_rainbow_path(&colouring, &serde_json::from_str::<Vec<Vertex>>(&text).map_err(bad)?),
    };
    emit(None, &to_json(&verdict)?)?;
    Ok(exit_if(verdict.rainbow))
}

#[derive(Serialize)]
struct OracleAnswer<T: Serialize> {
    question: &'static str,
    n: usize,
    #[serde(flatten)]
    result: T,
}

fn run_oracle(input: &Path, question: Question, r: usize) -> Outcome {
    let colouring = load(input)?;
    let n = colouring.vertex_count();
    match question {
        Question::HamPath => {
            let result = oracle::has_rainbow_hamiltonian_path(&colouring)?;
            let exists = result.exists;
            emit(None, &to_json(&OracleAnswer { question: "ham-path", n, result })?)?;
            Ok(exit_if(exists))
        }
        Question::LongestCycle => {
            let result = oracle::longest_rainbow_cycle_exact(&colouring)?;
            emit(None, &to_json(&OracleAnswer { question: "longest-cycle", n, result })?)?;
            Ok(ExitCode::SUCCESS)
        }
        Question::Forest => {
            let result = oracle::max_rainbow_forest_exact(&colouring.full_subgraph(), r)?;
            emit(None, &to_json(&OracleAnswer { question: "forest", n, result })?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SweepRow {
    n: usize,
    family: String,
    seed: u64,
    alpha: f64,
    cycle_length: usize,
    greedy_length: usize,
    deficit: usize,
    wallclock_ms: u64,
}

fn sweep_cell(registry: &FamilyRegistry, family: &str, n: usize, seed: u64, alpha: f64) -> Result<SweepRow, Failure> {
    let colouring = registry.generate(family, &GenRequest::new(n, seed))?;
    let report = pipeline::run(&colouring, &PipelineParams::with_seed(alpha, seed))?;
    Ok(SweepRow {
        n,
        family: family.to_string(),
        seed,
        alpha,
        cycle_length: report.cycle_length,
        greedy_length: pipeline::greedy_length(&colouring),
        deficit: n - report.cycle_length,
        wallclock_ms: report.wallclock_ms,
    })
}

fn threads() -> Result<usize, Failure> {
    match std::env::var("RAINBOW_THREADS") {
        Ok(v) => v.trim().parse().map_err(|_| fail("invalid-argument", format!("RAINBOW_THREADS={v} is not a count"))),
        Err(_) => Ok(0),
    }
}

fn sweep(family: &str, sizes: &[usize], seeds: u64, alpha: f64, csv_path: Option<&Path>) -> Outcome {
    let registry = FamilyRegistry::builtin();
    registry.get(family)?;
    let cells: Vec<(usize, u64)> = sizes.iter().flat_map(|&n| (1..=seeds).map(move |s| (n, s))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()?).build().map_err(|e| fail("internal", e))?;
    let mut rows = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, seed)| sweep_cell(&registry, family, n, seed, alpha))
            .collect::<Result<Vec<_>, _>>()
    })?;
    rows.sort_by_key(|r| (r.n, r.seed));
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer.serialize(row).map_err(|e| fail("csv", e))?;
    }
    let bytes = writer.into_inner().map_err(|e| fail("csv", e))?;
    emit(csv_path, &String::from_utf8(bytes).map_err(|e| fail("csv", e))?)?;
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen { family, n, latin_file, seed, out } => gen(&family, n, latin_file.as_deref(), seed, out.as_deref()),
        Command::FindCycle { input, alpha, seed, resample, json } => {
            let params = PipelineParams { alpha, seed, h_resample_attempts: resample };
            find_cycle(&input, params, json.as_deref())
        }
        Command::Verify { input, witness, kind } => verify(&input, &witness, kind),
        Command::ExpanderStats { input, p, set_size, trials, tolerance, seed } => {
            let colouring = load(&input)?;
            let report = sampling::expansion_probe(&colouring, p, set_size, trials, tolerance, seed)?;
            emit(None, &to_json(&report)?)?;
            Ok(exit_if(report.pass()))
        }
        Command::Oracle { input, question, r } => run_oracle(&input, question, r),
        Command::Sweep { family, sizes, seeds, alpha, csv } => sweep(&family, &sizes, seeds, alpha, csv.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: usage: {line}");
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}: {}", f.code, f.detail.replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
