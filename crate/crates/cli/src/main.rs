use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dynmatch::harness::{
    self, gen_insertion_stream, gen_undo_suffix, parse_static_edgelist, parse_tau_grid, parse_temporal,
    perf_profile, read_results_csv, write_results_csv, write_static, write_temporal, Algorithm, ChurnSpec,
    ReplayOptions, RunResult, UpdateStream,
};
use dynmatch::{LevelConfig, McmConfig, McmKind, RandomConfig, Weight};

#[derive(Parser)]
#[command(name = "dynmatch", version, about = "Fully-dynamic approximate maximum weight matching")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay an update stream through one or more algorithms.
    Run(RunArgs),
    /// Build a performance profile from result files.
    Profile(ProfileArgs),
    /// Generate instances and update streams.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoName {
    Random,
    LevelWalk,
    LevelBfs,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum McmName {
    Walk,
    Bfs,
}

#[derive(Args)]
struct RunArgs {
    /// Algorithms to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "random")]
    algo: Vec<AlgoName>,
    /// Static edge list; edges are inserted in a random order.
    #[arg(long, conflicts_with = "temporal", required_unless_present = "temporal")]
    input: Option<PathBuf>,
    /// Temporal edge stream.
    #[arg(long)]
    temporal: Option<PathBuf>,
    #[arg(long, env = "DYNMATCH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Append an undo suffix covering this percentage of the stream.
    #[arg(long, default_value_t = 0.0)]
    undo_percent: f64,
    /// Check matching invariants after every update.
    #[arg(long)]
    audit: bool,
    /// Parse weights as floating point numbers.
    #[arg(long)]
    float_weights: bool,
    /// Optimum weight of the final graph, skipping the exact solver.
    #[arg(long, conflicts_with = "opt_file")]
    opt: Option<String>,
    /// File holding the optimum weight of the final graph.
    #[arg(long)]
    opt_file: Option<PathBuf>,
    /// Do not compute the optimum.
    #[arg(long)]
    no_opt: bool,
    /// Instance label in the results; defaults to the input file name.
    #[arg(long)]
    instance: Option<String>,
    /// Results CSV; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,

    #[command(flatten)]
    random: RandomArgs,
    #[command(flatten)]
    level: LevelArgs,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 10)]
    walks: usize,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    stop_early: bool,
    #[arg(long, default_value_t = 5)]
    beta: usize,
    #[arg(long)]
    theorem_mode: bool,
    #[arg(long, default_value_t = 5)]
    retry_budget: usize,
}

#[derive(Args)]
struct LevelArgs {
    #[arg(long, default_value_t = 1.0)]
    level_epsilon: f64,
    /// Overrides the MCM kind implied by --algo.
    #[arg(long, value_enum)]
    mcm: Option<McmName>,
    #[arg(long, default_value_t = 0.1)]
    mcm_epsilon: f64,
    #[arg(long, default_value_t = 1)]
    mcm_repetitions: usize,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    delta_settling: bool,
    #[arg(long, default_value_t = 0)]
    lazy_threshold: usize,
    #[arg(long)]
    safe_mode: bool,
    #[arg(long)]
    unbounded_depth: bool,
    #[arg(long)]
    allow_small_epsilon: bool,
    /// Weights are divided by this before bucketing.
    #[arg(long, default_value_t = 1.0)]
    weight_scale: f64,
}

#[derive(Args)]
struct ProfileArgs {
    /// Result CSV files written by `run`.
    #[arg(long, required = true, num_args = 1..)]
    results: Vec<PathBuf>,
    /// `start:end:step` or a comma separated list.
    #[arg(long, default_value = "0.5:1:0.01")]
    tau_grid: String,
    /// Profile TSV; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random G(n, m) static graph.
    Gnm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, env = "DYNMATCH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Random static graph with bounded degree.
    Bounded {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        attempts: usize,
        #[arg(long, env = "DYNMATCH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Temporal stream inserting a static graph in random order, with an
    /// optional undo suffix.
    Stream {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, env = "DYNMATCH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        undo_percent: f64,
        #[arg(long)]
        float_weights: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Random mixed insert/delete stream.
    Churn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ops: usize,
        #[arg(long, default_value_t = 0.6)]
        insert_prob: f64,
        /// Only insert edges between `0..left` and `left..n`.
        #[arg(long)]
        left: Option<usize>,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long, env = "DYNMATCH_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = dispatch(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) if args.float_weights => run::<f64>(args),
        Command::Run(args) => run::<i64>(args),
        Command::Profile(args) => profile(args),
        Command::Gen(cmd) => generate(cmd),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn algorithms(args: &RunArgs) -> Vec<Algorithm> {
    let r = &args.random;
    let random = RandomConfig {
        epsilon: r.epsilon,
        walks: r.walks,
        stop_early: r.stop_early,
        beta: r.beta,
        theorem_mode: r.theorem_mode,
        retry_budget: r.retry_budget,
    };
    let l = &args.level;
    let level = |kind: McmKind| LevelConfig {
        epsilon: l.level_epsilon,
        mcm_kind: match l.mcm {
            Some(McmName::Walk) => McmKind::Walk,
            Some(McmName::Bfs) => McmKind::Bfs,
            None => kind,
        },
        mcm: McmConfig {
            epsilon: l.mcm_epsilon,
            repetitions: l.mcm_repetitions,
            delta_settling: l.delta_settling,
            lazy_threshold: l.lazy_threshold,
            safe_mode: l.safe_mode,
            depth_bounded: !l.unbounded_depth,
        },
        allow_small_epsilon: l.allow_small_epsilon,
        weight_scale: l.weight_scale,
    };
    let mut out: Vec<Algorithm> = args
        .algo
        .iter()
        .map(|a| match a {
            AlgoName::Random => Algorithm::Random(random.clone()),
            AlgoName::LevelWalk => Algorithm::Level(level(McmKind::Walk)),
            AlgoName::LevelBfs => Algorithm::Level(level(McmKind::Bfs)),
            AlgoName::Oracle => Algorithm::Optimum,
        })
        .collect();
    out.dedup();
    out
}

fn load_stream<W: Weight>(args: &RunArgs) -> Result<(UpdateStream<W>, String)> {
    let (stream, path) = if let Some(p) = &args.temporal {
        let (s, cleanup) = parse_temporal::<W>(&read(p)?, args.seed).with_context(|| format!("parsing {}", p.display()))?;
        if cleanup != Default::default() {
            log::warn!(
                "{}: dropped {} self-loops, {} inserts of present edges, {} deletes of absent edges",
                p.display(),
                cleanup.self_loops,
                cleanup.present_inserts,
                cleanup.absent_deletes
            );
        }
        (s, p)
    } else {
        let p = args.input.as_ref().expect("clap requires --input or --temporal");
        let g = parse_static_edgelist::<W>(&read(p)?).with_context(|| format!("parsing {}", p.display()))?;
        if g.self_loops + g.duplicates > 0 {
            log::warn!("{}: dropped {} self-loops and {} duplicate edges", p.display(), g.self_loops, g.duplicates);
        }
        (gen_insertion_stream(&g, args.seed), p)
    };
    if !(0.0..=100.0).contains(&args.undo_percent) {
        bail!("--undo-percent must lie in [0, 100]");
    }
    let stream = gen_undo_suffix(&stream, args.undo_percent, args.seed);
    let label = args.instance.clone().unwrap_or_else(|| {
        path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
    });
    Ok((stream, label))
}

fn parse_opt<W: Weight>(raw: &str) -> Result<W> {
    raw.trim().parse::<W>().map_err(|_| anyhow::anyhow!("invalid optimum '{}'", raw.trim()))
}

fn run<W: Weight>(args: RunArgs) -> Result<()> {
    let (stream, instance) = load_stream::<W>(&args)?;
    let opt = match (&args.opt, &args.opt_file) {
        (Some(raw), _) => Some(parse_opt::<W>(raw)?),
        (None, Some(p)) => Some(parse_opt::<W>(&read(p)?)?),
        (None, None) => None,
    };
    let opts = ReplayOptions {
        reps: args.reps,
        audit: args.audit,
        opt,
        compute_opt: !args.no_opt,
        instance,
        ..ReplayOptions::default()
    };
    let mut all: Vec<RunResult<W>> = Vec::new();
    for algo in algorithms(&args) {
        let results = harness::replay(&stream, &algo, args.seed, &opts).with_context(|| algo.label())?;
        summarize(&results);
        all.extend(results);
    }
    write_results_csv(output(args.out.as_deref())?, &all)?;
    Ok(())
}

fn summarize<W: Weight>(results: &[RunResult<W>]) {
    let Some(first) = results.first() else { return };
    let weights: Vec<f64> = results.iter().map(|r| r.weight.as_f64()).collect();
    let times: Vec<f64> = results.iter().map(|r| r.total_time.as_secs_f64()).collect();
    let ratios: Vec<f64> = results.iter().filter_map(|r| r.ratio()).collect();
    let gm = |v: &[f64]| harness::geometric_mean(v).unwrap_or(f64::NAN);
    eprint!(
        "{}\t{}\tupdates={}\tweight={:.3}\ttime={:.6}s",
        first.instance,
        first.algorithm,
        first.updates,
        gm(&weights),
        gm(&times)
    );
    if !ratios.is_empty() {
        eprint!("\tratio={:.6}", gm(&ratios));
    }
    eprintln!();
}

fn profile(args: ProfileArgs) -> Result<()> {
    let taus = parse_tau_grid(&args.tau_grid)?;
    let mut observations = Vec::new();
    for p in &args.results {
        let f = fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
        observations.extend(read_results_csv(f).with_context(|| format!("reading {}", p.display()))?);
    }
    let prof = perf_profile(&observations, &taus);
    if prof.instances == 0 {
        bail!("no instance has a known optimum");
    }
    output(args.out.as_deref())?.write_all(prof.to_tsv().as_bytes())?;
    Ok(())
}

fn generate(cmd: GenCommand) -> Result<()> {
    let (text, out) = match cmd {
        GenCommand::Gnm { n, m, seed, out } => {
            if m > n * n.saturating_sub(1) / 2 {
                bail!("{m} edges do not fit on {n} vertices");
            }
            (write_static(&harness::gnm::<i64>(n, m, seed)), out)
        }
        GenCommand::Bounded { n, max_degree, attempts, seed, out } => {
            (write_static(&harness::bounded_degree::<i64>(n, max_degree, attempts, seed)), out)
        }
        GenCommand::Stream { input, seed, undo_percent, float_weights, out } => {
            if !(0.0..=100.0).contains(&undo_percent) {
                bail!("--undo-percent must lie in [0, 100]");
            }
            let text = read(&input)?;
            let text = if float_weights {
                let g = parse_static_edgelist::<f64>(&text)?;
                write_temporal(&gen_undo_suffix(&gen_insertion_stream(&g, seed), undo_percent, seed))
            } else {
                let g = parse_static_edgelist::<i64>(&text)?;
                write_temporal(&gen_undo_suffix(&gen_insertion_stream(&g, seed), undo_percent, seed))
            };
            (text, out)
        }
        GenCommand::Churn { n, ops, insert_prob, left, max_edges, seed, out } => {
            if n < 2 || left.is_some_and(|l| l == 0 || l >= n) {
                bail!("churn needs two vertices on each side of the stream");
            }
            if !(0.0..=1.0).contains(&insert_prob) {
                bail!("--insert-prob must lie in [0, 1]");
            }
            let spec = ChurnSpec { n, ops, insert_prob, left, max_edges };
            (write_temporal(&harness::churn_stream::<i64>(&spec, seed)), out)
        }
    };
    fs::write(&out, text).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}
