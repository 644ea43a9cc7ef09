use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use divclust::compose::ClusteringAlg;
use divclust::feasibility::{feasibility_registry, select_facilities, Verdict};
use divclust::fpt::{CoresetMode, GuessSpace};
use divclust::heuristics::{LocalSearchParams, PatternSource};
use divclust::io::{
    format_points_csv, normalize_unit_norm, parse_dist_matrix, parse_points_csv, read_to_string, GroupsFile,
    SolveRecord,
};
use divclust::seed::derive_seed;
use divclust::solver::{run_solver, SolveConfig};
use divclust::synth::{generate_synthetic, SyntheticParams};
use divclust::{partition_classes, Error, GroupSystem, MetricInstance, Objective, Requirements};

#[derive(Parser)]
#[command(name = "divclust", version, about = "Diversity-aware k-median / k-means")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic blob instance (points CSV + groups JSON).
    Generate(GenerateArgs),
    /// Decide feasibility of the requirements with one engine.
    Feasible(FeasibleArgs),
    /// Solve an instance and print one JSON record.
    Solve(SolveArgs),
    /// Sweep synthetic instances over n / k / t and print one record per cell.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 4)]
    blobs: usize,
    #[arg(long, default_value_t = 4)]
    t: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Requirement vector, comma separated (default: all zero).
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<u32>>,
    #[arg(long, default_value_t = 0.05)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_points: PathBuf,
    #[arg(long)]
    out_groups: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalize {
    UnitNorm,
}

#[derive(Args)]
struct InputArgs {
    /// Points CSV with header id,x1,...,xD (clients = facilities = points).
    #[arg(long, conflicts_with = "dist")]
    points: Option<PathBuf>,
    /// Distance matrix file: n, then n rows of n numbers.
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Groups and requirements JSON: {"t", "groups", "r", "k"}.
    #[arg(long)]
    groups: PathBuf,
    #[arg(long, value_enum)]
    normalize: Option<Normalize>,
}

#[derive(Args)]
struct FeasibleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "dp")]
    engine: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone)]
struct AlgArgs {
    #[arg(long, default_value = "median")]
    objective: String,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// improv maximization for fpt: exact or greedy.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Leader/radius guesses: anchored or full.
    #[arg(long, default_value = "anchored")]
    guess_space: String,
    /// Client reduction for fpt/fpt3: sample or passthrough.
    #[arg(long, default_value = "sample")]
    coreset: String,
    /// Feasibility engine of the bicriteria union.
    #[arg(long, default_value = "dp")]
    engine: String,
    /// Clustering half of the bicriteria union (default: the objective's baseline).
    #[arg(long)]
    clustering: Option<String>,
    /// Pattern source for ls1: es, dp or all.
    #[arg(long, default_value = "es")]
    pattern_source: String,
    /// Facilities exchanged per ls0 move.
    #[arg(long, default_value_t = 1)]
    swap_size: usize,
    #[arg(long, default_value_t = 0.01)]
    eps_ls: f64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "fpt")]
    alg: String,
    #[command(flatten)]
    opts: AlgArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4")]
    t: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 4)]
    blobs: usize,
    /// Requirement per group, capped at k.
    #[arg(long, default_value_t = 1)]
    r_fill: u32,
    #[arg(long, value_delimiter = ',', default_value = "bicriteria")]
    alg: Vec<String>,
    #[command(flatten)]
    opts: AlgArgs,
}

enum Failure {
    Infeasible(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible => Failure::Infeasible(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn load(input: &InputArgs, objective: Objective) -> CliResult<(MetricInstance, GroupSystem, Requirements)> {
    let instance = match (&input.points, &input.dist) {
        (Some(p), None) => {
            let mut pts = parse_points_csv(&read_to_string(p)?)?;
            if input.normalize.is_some() {
                normalize_unit_norm(&mut pts);
            }
            MetricInstance::euclidean(&pts, objective)?
        }
        (None, Some(d)) => {
            if input.normalize.is_some() {
                return Err(Failure::Other("--normalize applies to --points only".into()));
            }
            MetricInstance::from_matrix(&parse_dist_matrix(&read_to_string(d)?)?, objective)?
        }
        _ => return Err(Failure::Other("exactly one of --points or --dist is required".into())),
    };
    let (groups, req) = load_groups(&input.groups, instance.num_facilities())?;
    Ok((instance, groups, req))
}

fn load_groups(path: &Path, num_facilities: usize) -> CliResult<(GroupSystem, Requirements)> {
    Ok(GroupsFile::parse(&read_to_string(path)?)?.build(num_facilities)?)
}

fn solve_config(opts: &AlgArgs, seed: u64) -> CliResult<SolveConfig> {
    let guess_space: GuessSpace = opts.guess_space.parse()?;
    let coreset = match opts.coreset.as_str() {
        "sample" => SolveConfig::default().coreset,
        "passthrough" => CoresetMode::Passthrough,
        other => return Err(Failure::Other(format!("unknown coreset mode '{other}' (sample, passthrough)"))),
    };
    let clustering = match &opts.clustering {
        Some(c) => Some(c.parse::<ClusteringAlg>()?),
        None => None,
    };
    Ok(SolveConfig {
        epsilon: opts.epsilon,
        seed,
        fpt_mode: opts.mode.clone(),
        guess_space,
        coreset,
        engine: opts.engine.clone(),
        clustering,
        pattern_source: opts.pattern_source.parse::<PatternSource>()?,
        local_search: LocalSearchParams {
            eps_ls: opts.eps_ls,
            swap_size: opts.swap_size,
            ..LocalSearchParams::default()
        },
    })
}

fn solve_record(
    alg: &str,
    instance: &MetricInstance,
    groups: &GroupSystem,
    req: &Requirements,
    cfg: &SolveConfig,
) -> CliResult<SolveRecord> {
    let start = Instant::now();
    let report = run_solver(alg, instance, groups, req, cfg)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let sol = report.solution;
    Ok(SolveRecord {
        alg: alg.to_string(),
        cost: sol.cost,
        k_star: report.k_star,
        zeta_star: report.zeta_star,
        coverage: sol.coverage,
        facilities: sol.facilities,
        runtime_ms,
        seed: cfg.seed,
        flags: sol.flags,
        feasible: Some(sol.feasible),
    })
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string(v).expect("records serialize"));
}

fn run_generate(a: &GenerateArgs) -> CliResult<()> {
    let inst = generate_synthetic(&SyntheticParams {
        n: a.n,
        dim: a.dim,
        blobs: a.blobs,
        t: a.t,
        k: a.k,
        r: a.r.clone(),
        sigma: a.sigma,
        seed: a.seed,
    })?;
    std::fs::write(&a.out_points, format_points_csv(&inst.points)).map_err(Error::from)?;
    std::fs::write(&a.out_groups, inst.groups.to_json() + "\n").map_err(Error::from)?;
    Ok(())
}

fn run_feasible(a: &FeasibleArgs) -> CliResult<()> {
    let num_facilities = match (&a.input.points, &a.input.dist) {
        (None, None) => {
            let file = GroupsFile::parse(&read_to_string(&a.input.groups)?)?;
            file.groups.iter().flatten().map(|&f| f + 1).max().unwrap_or(0)
        }
        _ => load(&a.input, Objective::Median)?.0.num_facilities(),
    };
    let (groups, req) = load_groups(&a.input.groups, num_facilities)?;
    let engines = feasibility_registry();
    let engine = engines.get(&a.engine)?;
    let start = Instant::now();
    let classes = partition_classes(&groups);
    let report = engine.solve(&classes, &req, a.seed)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let (feasible, picks, pattern) = match &report.verdict {
        Verdict::Feasible(m) => {
            let pattern: Vec<Value> = m
                .iter()
                .zip(&classes)
                .filter(|(&x, _)| x > 0)
                .map(|(&x, c)| json!({"signature": c.signature.display(groups.t()).to_string(), "count": x}))
                .collect();
            (json!(true), json!(select_facilities(m, &classes, a.seed)?), json!(pattern))
        }
        Verdict::Infeasible => (json!(false), Value::Null, Value::Null),
        Verdict::Inconclusive(_) => (Value::Null, Value::Null, Value::Null),
    };
    let mut rec = json!({
        "engine": engine.name(),
        "feasible": feasible,
        "picks": picks,
        "pattern": pattern,
        "state_count": report.state_count.map(|s| s as f64),
        "runtime_ms": runtime_ms,
        "seed": a.seed,
    });
    if let Some(n) = report.attempts {
        rec["attempts"] = json!(n);
    }
    print_json(&rec);
    match report.verdict {
        Verdict::Feasible(_) => Ok(()),
        Verdict::Infeasible => Err(Failure::Infeasible("infeasible instance".into())),
        Verdict::Inconclusive(msg) => Err(Failure::Other(msg)),
    }
}

fn run_solve(a: &SolveArgs) -> CliResult<()> {
    let objective: Objective = a.opts.objective.parse()?;
    let (instance, groups, req) = load(&a.input, objective)?;
    let cfg = solve_config(&a.opts, a.opts.seed)?;
    print_json(&solve_record(&a.alg, &instance, &groups, &req, &cfg)?);
    Ok(())
}

fn run_bench(a: &BenchArgs) -> CliResult<()> {
    let objective: Objective = a.opts.objective.parse()?;
    let mut cells = Vec::new();
    for &n in &a.n {
        for &k in &a.k {
            for &t in &a.t {
                for alg in &a.alg {
                    cells.push((n, k, t, alg.clone()));
                }
            }
        }
    }
    let records: Vec<Value> = cells
        .par_iter()
        .enumerate()
        .map(|(cell, (n, k, t, alg))| {
            let seed = derive_seed(a.opts.seed, cell as u64);
            let mut rec = json!({"cell": cell, "n": n, "k": k, "t": t, "alg": alg, "seed": seed});
            let outcome = (|| -> CliResult<SolveRecord> {
                let r = vec![a.r_fill.min(*k as u32); *t];
                let inst = generate_synthetic(&SyntheticParams {
                    n: *n,
                    dim: a.dim,
                    blobs: a.blobs,
                    t: *t,
                    k: *k,
                    r: Some(r),
                    sigma: 0.05,
                    seed,
                })?;
                let instance = MetricInstance::euclidean(&inst.points, objective)?;
                let (groups, req) = inst.groups.build(*n)?;
                let cfg = solve_config(&a.opts, seed)?;
                solve_record(alg, &instance, &groups, &req, &cfg)
            })();
            match outcome {
                Ok(r) => {
                    let body = serde_json::to_value(&r).expect("records serialize");
                    for (key, v) in body.as_object().expect("record is an object") {
                        rec[key] = v.clone();
                    }
                }
                Err(Failure::Infeasible(m) | Failure::Other(m)) => rec["error"] = json!(m),
            }
            rec
        })
        .collect();
    for r in &records {
        print_json(r);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("DIVCLUST_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().ok();
        }
    }
    let result = match &cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Feasible(a) => run_feasible(a),
        Command::Solve(a) => run_solve(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible(m)) => {
            eprintln!("divclust: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Other(m)) => {
            eprintln!("divclust: {m}");
            ExitCode::from(1)
        }
    }
}
