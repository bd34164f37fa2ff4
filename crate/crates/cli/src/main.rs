//! `vdb`: vertex-degree-based index computations and verifications.
//!
//! Exit codes: 0 success / pass, 1 verification failure, 2 input error,
//! 3 domain or hypothesis error.

mod index;
mod io;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use vdb_core::extremal::{
    check_certificate, construct_minimizer, greedy_descent, random_k_cyclic, ExtremalError, TieBreak,
};
use vdb_core::oracle::{verify_theorem, GraphClass, OracleError, RunOptions, Symmetry};
use vdb_core::property::{check_property_pstar, GridSpec, PropertyError, Verdict};
use vdb_core::tolerance::DESCENT_EPS;
use vdb_core::weights::{closed_form_min, compute_exponential_ti, compute_ti};
use vdb_core::{check_theorem_range, WeightError, WeightFunction};

use index::IndexArgs;
use io::{read_graph, render_graph, write_file, GraphFormat, OutputArgs};

const CHECKPOINT_DIR_VAR: &str = "VDB_CHECKPOINT_DIR";

/// A reason to stop with a non-zero exit code.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<WeightError> for Failure {
    fn from(e: WeightError) -> Self {
        match e {
            WeightError::Parameter(_) | WeightError::Table(_) => Failure::input(e.to_string()),
            _ => Failure::domain(e.to_string()),
        }
    }
}

impl From<PropertyError> for Failure {
    fn from(e: PropertyError) -> Self {
        match e {
            PropertyError::Weight(w) => w.into(),
            PropertyError::Grid(_) => Failure::input(e.to_string()),
            _ => Failure::domain(e.to_string()),
        }
    }
}

impl From<ExtremalError> for Failure {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::Weight(w) => w.into(),
            _ => Failure::domain(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Weight(w) => w.into(),
            OracleError::Checkpoint(_) | OracleError::CheckpointMismatch(_) | OracleError::Workers(_) => {
                Failure::input(e.to_string())
            }
            _ => Failure::domain(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "vdb", version, about = "Vertex-degree-based topological indices of k-cyclic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an index on a graph file.
    Compute(ComputeArgs),
    /// Grid-check the monotonicity properties of an index.
    Property(PropertyArgs),
    /// Build the minimizing k-cyclic graph and certify it.
    Construct(ConstructArgs),
    /// Confirm the minimum by exhaustive enumeration.
    Verify(VerifyArgs),
    /// Run swap descent from random starting graphs.
    Descend(DescendArgs),
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Graph file (.g6 or .edges, or any name with --format).
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<GraphFormat>,
    #[command(flatten)]
    index: IndexArgs,
    /// Also report the exponential index, the sum of e^I over edges.
    #[arg(long)]
    exponential: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct PropertyArgs {
    #[command(flatten)]
    index: IndexArgs,
    #[arg(long, default_value_t = 50)]
    dmax: usize,
    /// Spacing of the real-argument grid.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Where to write the graph; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "g6")]
    format: GraphFormat,
    /// Index used for the closed-form check in the certificate.
    #[command(flatten)]
    index: IndexArgs,
    /// Print the certificate as JSON.
    #[arg(long)]
    json: bool,
    /// Write the certificate JSON to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Chemical,
    Delta2,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SymmetryArg {
    Labeled,
    DegreeOrdered,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    index: IndexArgs,
    #[arg(long, value_enum, default_value = "chemical")]
    class: ClassArg,
    /// Enumerate every labeled graph, or one degree-sorted labeling per graph.
    #[arg(long, value_enum, default_value = "degree-ordered")]
    symmetry: SymmetryArg,
    /// Worker threads (defaults to available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Resumable progress file. VDB_CHECKPOINT_DIR, when set, overrides
    /// the directory (and enables checkpointing under a default name).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DescendArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    index: IndexArgs,
    /// Number of random starts.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// First seed; runs use seed, seed + 1, ...
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict random starts to maximum degree 4.
    #[arg(long)]
    chemical: bool,
    /// Start once from the constructed minimizer instead of random graphs.
    #[arg(long, conflicts_with_all = ["seeds", "seed", "chemical"])]
    from_minimizer: bool,
    /// Write one JSON-lines trace per run into this directory.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => compute(args),
        Command::Property(args) => property(args),
        Command::Construct(args) => construct(args),
        Command::Verify(args) => verify(args),
        Command::Descend(args) => descend(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn compute(args: ComputeArgs) -> Result<bool, Failure> {
    let weight = args.index.weight().map_err(Failure::input)?;
    let g = read_graph(&args.input, args.format)?;
    let ti = compute_ti(&g, &weight)?;
    let exponential_ti = if args.exponential {
        Some(compute_exponential_ti(&g, &weight)?.value)
    } else {
        None
    };
    let k = g.cyclomatic_number().ok();
    let mut report = json!({
        "index": args.index.index,
        "params": weight,
        "n": g.n(),
        "m": g.m(),
        "k": k,
        "ti": ti.value,
        "graph_digest": ti.graph_digest,
    });
    if let Some(e) = exponential_ti {
        report["exponential_ti"] = json!(e);
    }
    let mut summary = format!("{weight}: TI = {:.12}  (n = {}, m = {}", ti.value, g.n(), g.m());
    match k {
        Some(k) => write!(summary, ", k = {k})").unwrap(),
        None => summary.push_str(", disconnected)"),
    }
    if let Some(e) = exponential_ti {
        write!(summary, "\nexponential TI = {e:.12}").unwrap();
    }
    summary.push('\n');
    args.output.emit(&report, &summary)?;
    Ok(true)
}

fn property(args: PropertyArgs) -> Result<bool, Failure> {
    let weight = args.index.weight().map_err(Failure::input)?;
    let grid = GridSpec::new(args.dmax, args.step, args.tolerance).map_err(|e| Failure::input(e.to_string()))?;
    let report = check_property_pstar(&weight, &grid)?;
    let pass = report.pstar_holds == Verdict::Pass;
    let mut summary = format!(
        "{weight}: P {:?}, P* {:?} (grid dmax = {}, step = {})\n",
        report.p_holds, report.pstar_holds, grid.dmax, grid.continuous_step
    );
    if let Some(c) = &report.counterexample {
        writeln!(summary, "counterexample: {}", serde_json::to_string(c).expect("serializable")).unwrap();
    }
    args.output.emit(&report, &summary)?;
    Ok(pass)
}

fn construct(args: ConstructArgs) -> Result<bool, Failure> {
    let weight = args.index.weight().map_err(Failure::input)?;
    let g = construct_minimizer(args.n, args.k).map_err(|e| Failure::domain(e.to_string()))?;
    let certificate = check_certificate(&g, std::slice::from_ref(&weight))?;
    let rendered = render_graph(&g, args.format);
    match &args.out {
        Some(path) => write_file(path, &rendered)?,
        None => print!("{rendered}"),
    }
    let value = serde_json::to_value(&certificate).expect("certificate serializes");
    if let Some(path) = &args.report {
        write_file(path, &(value.to_string() + "\n"))?;
    }
    if args.json {
        println!("{value}");
    } else {
        let classes: Vec<String> = g
            .edge_class_counts()
            .iter()
            .map(|((i, j), c)| format!("({i},{j}):{c}"))
            .collect();
        eprintln!(
            "certificate {}: n = {}, m = {}, k = {}, classes {{{}}}, {weight} TI = {:.12}",
            if certificate.passes() { "Pass" } else { "Fail" },
            g.n(),
            g.m(),
            args.k,
            classes.join(","),
            certificate.ti_values[&weight.to_string()],
        );
    }
    Ok(certificate.passes())
}

fn checkpoint_path(args: &VerifyArgs) -> Option<PathBuf> {
    let default_name = || {
        PathBuf::from(format!(
            "verify-n{}-k{}-{:?}-{}.json",
            args.n,
            args.k,
            args.class,
            args.index.index.replace(':', "_")
        ))
    };
    match std::env::var_os(CHECKPOINT_DIR_VAR) {
        Some(dir) => {
            let name = args
                .checkpoint
                .as_ref()
                .and_then(|p| p.file_name().map(PathBuf::from))
                .unwrap_or_else(default_name);
            Some(PathBuf::from(dir).join(name))
        }
        None => args.checkpoint.clone(),
    }
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let weight = args.index.weight().map_err(Failure::input)?;
    if args.workers == Some(0) {
        return Err(Failure::input("--workers must be at least 1"));
    }
    check_theorem_range(args.n, args.k).map_err(|e| Failure::domain(e.to_string()))?;
    let certification = check_property_pstar(&weight, &GridSpec::default())?;
    if certification.pstar_holds != Verdict::Pass {
        return Err(Failure::domain(format!("{weight} is not P*-certified on the default grid")));
    }
    let class = match args.class {
        ClassArg::Chemical => GraphClass::Chemical,
        ClassArg::Delta2 => GraphClass::Delta2,
        ClassArg::All => GraphClass::All,
    };
    let symmetry = match args.symmetry {
        SymmetryArg::Labeled => Symmetry::Labeled,
        SymmetryArg::DegreeOrdered => Symmetry::DegreeOrdered,
    };
    let options = RunOptions {
        workers: args.workers,
        checkpoint: checkpoint_path(&args),
        ..RunOptions::default()
    };
    let report = verify_theorem(args.n, args.k, &weight, class, symmetry, &options)?;
    let summary = format!(
        "{} {weight} over {:?} graphs (n = {}, k = {}): min {} vs closed form {:.12}; profiles {}; {} graphs in {:.1}s\n",
        if report.pass { "PASS" } else { "FAIL" },
        class,
        args.n,
        args.k,
        report.min_value.map_or("none".to_string(), |v| format!("{v:.12}")),
        report.closed_form,
        if report.profiles_match { "match" } else { "differ" },
        report.graphs_visited,
        report.elapsed_seconds,
    );
    args.output.emit(&report, &summary)?;
    Ok(report.pass)
}

#[derive(Serialize)]
struct RunSummary {
    seed: Option<u64>,
    steps: usize,
    initial_ti: f64,
    final_ti: f64,
    monotone: bool,
}

#[derive(Serialize)]
struct DescendReport {
    n: usize,
    k: usize,
    weight: WeightFunction,
    closed_form: Option<f64>,
    runs: Vec<RunSummary>,
    all_monotone: bool,
    min_final_ti: f64,
    median_final_ti: f64,
    /// Runs whose final value lies below the closed-form minimum (minus 1e-9).
    below_closed_form: usize,
}

fn descend(args: DescendArgs) -> Result<bool, Failure> {
    let weight = args.index.weight().map_err(Failure::input)?;
    let closed_form = match closed_form_min(args.n, args.k, &weight) {
        Ok(v) => Some(v),
        Err(WeightError::Hypothesis(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let starts: Vec<(Option<u64>, vdb_core::Graph)> = if args.from_minimizer {
        let g = construct_minimizer(args.n, args.k).map_err(|e| Failure::domain(e.to_string()))?;
        vec![(None, g)]
    } else {
        (args.seed..args.seed + args.seeds)
            .map(|seed| Ok((Some(seed), random_k_cyclic(args.n, args.k, seed, args.chemical)?)))
            .collect::<Result<_, ExtremalError>>()?
    };
    let run = || {
        starts
            .par_iter()
            .map(|(seed, g)| greedy_descent(g, &weight, TieBreak::Lexicographic).map(|d| (*seed, d)))
            .collect::<Result<Vec<_>, _>>()
    };
    let descents = match args.workers {
        Some(0) => return Err(Failure::input("--workers must be at least 1")),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Failure::input(e.to_string()))?
            .install(run)?,
        None => run()?,
    };

    if let Some(dir) = &args.trace_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
        for (seed, d) in &descents {
            let name = seed.map_or("minimizer.jsonl".to_string(), |s| format!("seed-{s}.jsonl"));
            let lines: String = d
                .trace
                .iter()
                .map(|step| serde_json::to_string(step).expect("trace serializes") + "\n")
                .collect();
            write_file(&dir.join(name), &lines)?;
        }
    }

    let runs: Vec<RunSummary> = descents
        .iter()
        .map(|(seed, d)| RunSummary {
            seed: *seed,
            steps: d.trace.len(),
            initial_ti: d.initial_ti,
            final_ti: d.final_ti(),
            monotone: d.is_monotone(),
        })
        .collect();
    let mut finals: Vec<f64> = runs.iter().map(|r| r.final_ti).collect();
    finals.sort_by(f64::total_cmp);
    let median = match finals.len() {
        0 => f64::NAN,
        len if len % 2 == 1 => finals[len / 2],
        len => (finals[len / 2 - 1] + finals[len / 2]) / 2.0,
    };
    let below = closed_form.map_or(0, |c| finals.iter().filter(|&&f| f < c - DESCENT_EPS).count());
    let report = DescendReport {
        n: args.n,
        k: args.k,
        weight: weight.clone(),
        closed_form,
        all_monotone: runs.iter().all(|r| r.monotone),
        min_final_ti: finals.first().copied().unwrap_or(f64::NAN),
        median_final_ti: median,
        below_closed_form: below,
        runs,
    };
    let summary = format!(
        "{} runs, {weight}: all monotone = {}, final TI min {:.9} / median {:.9}, closed form {}, below closed form: {}\n",
        report.runs.len(),
        report.all_monotone,
        report.min_final_ti,
        report.median_final_ti,
        closed_form.map_or("n/a".to_string(), |c| format!("{c:.9}")),
        below,
    );
    args.output.emit(&report, &summary)?;
    Ok(report.all_monotone)
}
