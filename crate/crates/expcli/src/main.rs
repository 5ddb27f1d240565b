use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ramsey_exp::{run, suite, ExperimentConfig};

#[derive(Parser)]
#[command(name = "ramsey-exp", version, about = "Seeded experiments on Cayley-graph Ramsey constructions and few-color spanning trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
struct Common {
    /// Key-value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Group, e.g. Z5^4, F13^2, Z5xZ25 (or `random` where supported).
    #[arg(long)]
    group: Option<String>,
    /// Generating-set sampler: uniform:<p>, z5d or coprime6.
    #[arg(long)]
    sampler: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Directory for <experiment>.csv, .jsonl and .timings.csv; rows go to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Node budget for the clique solver; exhausted rows are flagged inexact.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Input file (the `clique` verb reads an adjacency list).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Experiment parameter, repeatable.
    #[arg(long = "param", short = 'p', value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample symmetric generating sets.
    Sample(Common),
    /// Clique and independence numbers of sampled Cayley graphs, or of --input.
    Clique(Common),
    /// Greedy span length on properized difference colorings.
    Span(Common),
    /// Few-color spanning trees (param host = rainbow | difference | hard).
    Tree(Common),
    /// Build hard instances and report their palettes.
    #[command(name = "hard-instance")]
    HardInstance(Common),
    /// Ball-process growth times on a split difference coloring.
    #[command(name = "growth-sim")]
    GrowthSim(Common),
    /// Exact small-doubling counts.
    Count(Common),
    /// Dimension witnesses of random sets.
    Dimension(Common),
    /// Star compression (param mode = star | inequality).
    Compress(Common),
    /// F-minus bound checks (param exhaustive = true for every subset).
    #[command(name = "check-fminus")]
    CheckFminus(Common),
    /// Self-complementary Cayley graphs over Z5^d.
    #[command(name = "z5d-ramsey")]
    Z5dRamsey(Common),
    /// Quadruple-free generating sets in groups of order coprime to 6.
    #[command(name = "coprime6-ramsey")]
    Coprime6Ramsey(Common),
    /// Rotational Cayley r-colorings of F_q^2.
    Rcoloring(Common),
    /// Run the acceptance criteria.
    Suite {
        /// Criteria to run, e.g. --only 1,5,11 (all by default).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long)]
        workers: Option<usize>,
        /// Print the per-experiment digests under each criterion.
        #[arg(long)]
        verbose: bool,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn build_config(verb: &str, common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let cfg = ExperimentConfig::parse(&text)?;
            if cfg.experiment != verb {
                bail!("config is for {:?}, not {verb:?}", cfg.experiment);
            }
            cfg
        }
        None => {
            let mut cfg = ExperimentConfig::new(verb);
            cfg.workers = default_workers();
            cfg
        }
    };
    if let Some(g) = &common.group {
        cfg.group = Some(g.clone());
    }
    if let Some(s) = &common.sampler {
        cfg.sampler = Some(s.clone());
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    if let Some(o) = &common.out {
        cfg.out = Some(o.clone());
    }
    if let Some(b) = common.budget {
        cfg.budget = Some(b);
    }
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    if let Some(i) = &common.input {
        cfg.input = Some(i.clone());
    }
    for p in &common.params {
        let Some((k, v)) = p.split_once('=') else {
            bail!("--param expects KEY=VALUE, got {p:?}");
        };
        cfg.set(k.trim(), v.trim())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_experiment(verb: &str, common: &Common) -> Result<bool> {
    let cfg = build_config(verb, common)?;
    let report = run(&cfg)?;
    match &cfg.out {
        Some(dir) => {
            for path in report.write(dir)? {
                eprintln!("wrote {}", path.display());
            }
            fs::write(dir.join(format!("{verb}.config")), cfg.to_text())?;
            print!("{}", report.digest());
        }
        None => {
            print!("{}", report.to_jsonl());
            eprint!("{}", report.digest());
        }
    }
    Ok(!report.failed())
}

fn run_suite(only: &[u8], workers: Option<usize>, verbose: bool) -> Result<bool> {
    let ids: Vec<u8> = if only.is_empty() { suite::IDS.collect() } else { only.to_vec() };
    let workers = workers.unwrap_or_else(default_workers);
    let mut all = true;
    for id in ids {
        let outcome = suite::criterion(id, workers)?;
        println!("{}", outcome.line());
        if verbose || !outcome.pass {
            for d in &outcome.details {
                println!("    {d}");
            }
        }
        all &= outcome.pass;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Suite { only, workers, verbose } => run_suite(only, *workers, *verbose),
        Command::Sample(c) => run_experiment("sample", c),
        Command::Clique(c) => run_experiment("clique", c),
        Command::Span(c) => run_experiment("span", c),
        Command::Tree(c) => run_experiment("tree", c),
        Command::HardInstance(c) => run_experiment("hard-instance", c),
        Command::GrowthSim(c) => run_experiment("growth-sim", c),
        Command::Count(c) => run_experiment("count", c),
        Command::Dimension(c) => run_experiment("dimension", c),
        Command::Compress(c) => run_experiment("compress", c),
        Command::CheckFminus(c) => run_experiment("check-fminus", c),
        Command::Z5dRamsey(c) => run_experiment("z5d-ramsey", c),
        Command::Coprime6Ramsey(c) => run_experiment("coprime6-ramsey", c),
        Command::Rcoloring(c) => run_experiment("rcoloring", c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
