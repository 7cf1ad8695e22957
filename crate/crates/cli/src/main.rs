//! `locmix`: generators, mixing-time oracles, distributed local-mixing
//! simulations, and push-pull gossip experiments over edge-list graphs.
//!
//! Exit codes: 0 success, 2 invalid input or model violation (bipartite
//! without `--lazy`, irregular graph in a distributed mode, parse errors),
//! 3 step cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use locmix_core::{
    approx_local_mixing, exact_local_mixing, local_mixing_oracle, mixing_time, run_spreading,
    validate_condition, Error as CoreError, Graph, GraphKind, LengthSchedule, LocalMixParams,
    MixParams, OracleMode, SpreadReport, DEFAULT_DENOM_EXPONENT, DEFAULT_EPS,
};

mod report;

use report::{
    graph_summary, median, AlgoRun, GossipResult, GossipRunEcho, MixRun, MultiSourceResult,
    OracleRun, RunReport, SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(name = "locmix", version, about = "Random-walk local mixing times: oracles, CONGEST simulation, gossip")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark graph as an edge-list file
    Gen(GenArgs),
    /// Mixing time of a walk from a source node
    Mix(MixArgs),
    /// Local mixing time: definition/grid oracles or distributed simulation
    LocalMix(LocalMixArgs),
    /// Push-pull gossip runs with the partial-spreading checker
    Gossip(GossipArgs),
}

#[derive(Args)]
struct GenCommon {
    /// Output path for the edge list (stdout when omitted)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Seed for randomized generators
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum GenKind {
    /// Complete graph K_n
    Complete {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Cycle C_n
    Cycle {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Path on n nodes
    Path {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Seeded random d-regular graph (pairing model)
    RandomRegular {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Path of cliques joined by single bridge edges
    Barbell {
        /// Number of cliques
        #[arg(long)]
        cliques: usize,
        /// Nodes per clique
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Args)]
struct SourceArgs {
    /// Source node id
    #[arg(long, default_value_t = 0)]
    source: usize,
    /// Run from every source and report the maximum
    #[arg(long, conflicts_with_all = ["sample_sources", "source"])]
    all_sources: bool,
    /// Run from this many sampled sources and report the maximum
    #[arg(long, conflicts_with = "source")]
    sample_sources: Option<usize>,
}

#[derive(Args)]
struct MixArgs {
    /// Edge-list graph file
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    sources: SourceArgs,
    /// Accuracy threshold
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Use the lazy walk (stay put with probability 1/2)
    #[arg(long)]
    lazy: bool,
    /// Seed (source sampling)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Definition-mode oracle: threshold eps, all set sizes
    OracleDef,
    /// Algorithm-rule oracle: 4*eps, (1+eps) size grid
    OracleGrid,
    /// Distributed doubling-length 2-approximation
    Approx,
    /// Distributed unit-length variant
    Exact,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::OracleDef => "oracle-def",
            Mode::OracleGrid => "oracle-grid",
            Mode::Approx => "approx",
            Mode::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Schedule {
    Powers,
    Unit,
}

#[derive(Args)]
struct LocalMixArgs {
    /// Edge-list graph file
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    sources: SourceArgs,
    /// Set-size bound: witness sets have at least n/beta nodes
    #[arg(long)]
    beta: f64,
    /// Accuracy threshold
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    /// Fixed-point denominator exponent (grid 1/n^c)
    #[arg(long, default_value_t = DEFAULT_DENOM_EXPONENT)]
    c: u32,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Walk-length schedule for the oracle-grid mode
    #[arg(long, value_enum, default_value_t = Schedule::Powers)]
    schedule: Schedule,
    /// Use the lazy walk
    #[arg(long)]
    lazy: bool,
    /// Definition mode: require the source inside the witness set
    #[arg(long)]
    contain_source: bool,
    /// Random tie-breaking offsets instead of deterministic id order
    #[arg(long)]
    perturb: bool,
    /// Run the distributed modes on irregular graphs (exact per-sender
    /// fractions; the uniform 1/R target is still the acceptance rule)
    #[arg(long)]
    allow_irregular: bool,
    /// Seed (source sampling, perturbation)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GossipArgs {
    /// Edge-list graph file
    #[arg(long)]
    graph: PathBuf,
    /// Partial-spreading bound: n/beta holders per token, tokens per node
    #[arg(long)]
    beta: f64,
    /// Number of seeded runs (seeds are seed, seed+1, ...)
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    /// Base seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Round budget per run (default 20*n)
    #[arg(long)]
    budget: Option<u64>,
    /// Also write the JSON report to this path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the first run's coverage histogram as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::ExceededCap(_)) => 3,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli);
    eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Mix(args) => run_mix(args),
        Command::LocalMix(args) => run_local_mix(args),
        Command::Gossip(args) => run_gossip(args),
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(Graph::parse_edge_list(&text)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn emit<P: Serialize, R: Serialize>(
    graph: &Graph,
    params: P,
    result: R,
    json: Option<&Path>,
) -> Result<(), CliError> {
    let report = RunReport {
        schema: SCHEMA_VERSION,
        command: command_echo(),
        graph: graph_summary(graph),
        params,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Io(format!("report serialization failed: {e}")))?;
    text.push('\n');
    print!("{text}");
    if let Some(path) = json {
        write_text(path, &text)?;
    }
    Ok(())
}

/// Deterministic sample of `k` distinct sources.
fn sampled_sources(n: usize, k: usize, seed: u64) -> Vec<usize> {
    // splitmix-driven Fisher-Yates prefix
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    let mut ids: Vec<usize> = (0..n).collect();
    let k = k.min(n);
    for i in 0..k {
        let j = i + (next() as usize) % (n - i);
        ids.swap(i, j);
    }
    let mut sample = ids[..k].to_vec();
    sample.sort_unstable();
    sample
}

fn resolve_sources(g: &Graph, args: &SourceArgs, seed: u64) -> Result<Vec<usize>, CliError> {
    let n = g.node_count();
    if args.all_sources {
        return Ok((0..n).collect());
    }
    if let Some(k) = args.sample_sources {
        if k == 0 {
            return Err(CliError::Core(CoreError::InfeasibleParams(
                "--sample-sources needs k >= 1".into(),
            )));
        }
        return Ok(sampled_sources(n, k, seed));
    }
    if args.source >= n {
        return Err(CliError::Core(CoreError::OutOfRange { id: args.source, n }));
    }
    Ok(vec![args.source])
}

fn run_gen(args: GenArgs) -> Result<(), CliError> {
    let (kind, common) = match args.kind {
        GenKind::Complete { n, common } => (GraphKind::Complete { n }, common),
        GenKind::Cycle { n, common } => (GraphKind::Cycle { n }, common),
        GenKind::Path { n, common } => (GraphKind::Path { n }, common),
        GenKind::RandomRegular { n, d, common } => (GraphKind::RandomRegular { n, d }, common),
        GenKind::Barbell { cliques, size, common } => {
            (GraphKind::Barbell { cliques, size }, common)
        }
    };
    let g = locmix_core::generate(&kind, common.seed)?;
    let text = g.to_edge_list_string();
    match common.out {
        Some(path) => write_text(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct MixParamsEcho {
    eps: f64,
    lazy: bool,
    sources: Vec<usize>,
    seed: u64,
}

fn run_mix(args: MixArgs) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let sources = resolve_sources(&g, &args.sources, args.seed)?;
    let params = MixParamsEcho {
        eps: args.eps,
        lazy: args.lazy,
        sources: sources.clone(),
        seed: args.seed,
    };
    let mut runs = Vec::new();
    for &s in &sources {
        let tau = mixing_time(&g, s, args.eps, args.lazy)?;
        runs.push((s, MixRun { tau }));
    }
    if runs.len() == 1 {
        let (source, run) = runs.pop().unwrap();
        #[derive(Serialize)]
        struct Single {
            source: usize,
            tau: u64,
        }
        emit(&g, params, Single { source, tau: run.tau }, args.json.as_deref())
    } else {
        let multi = MultiSourceResult::new(runs, |r| r.tau);
        emit(&g, params, multi, args.json.as_deref())
    }
}

#[derive(Serialize)]
struct LocalMixParamsEcho {
    mode: String,
    beta: f64,
    eps: f64,
    c: u32,
    lazy: bool,
    contain_source: bool,
    perturb: bool,
    allow_irregular: bool,
    sources: Vec<usize>,
    seed: u64,
}

enum LocalMixRun {
    Oracle(OracleRun),
    Algo(AlgoRun),
}

fn run_local_mix(args: LocalMixArgs) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let sources = resolve_sources(&g, &args.sources, args.seed)?;
    let params_echo = LocalMixParamsEcho {
        mode: args.mode.name().to_string(),
        beta: args.beta,
        eps: args.eps,
        c: args.c,
        lazy: args.lazy,
        contain_source: args.contain_source,
        perturb: args.perturb,
        allow_irregular: args.allow_irregular,
        sources: sources.clone(),
        seed: args.seed,
    };

    let mut runs = Vec::new();
    for &s in &sources {
        let run = match args.mode {
            Mode::OracleDef | Mode::OracleGrid => {
                let mut mp = MixParams::new(args.beta, args.eps)?;
                if args.lazy {
                    mp = mp.lazy();
                }
                let mode = match args.mode {
                    Mode::OracleDef => {
                        OracleMode::Definition { contain_source: args.contain_source }
                    }
                    _ => OracleMode::AlgorithmGrid {
                        schedule: match args.schedule {
                            Schedule::Powers => LengthSchedule::PowersOfTwo,
                            Schedule::Unit => LengthSchedule::Unit,
                        },
                    },
                };
                let res = local_mixing_oracle(&g, s, &mp, mode)?;
                let condition_value = validate_condition(&g, &res).ok();
                LocalMixRun::Oracle(OracleRun {
                    tau: res.tau,
                    set_size: res.set_size,
                    gap: res.gap,
                    witness: res.witness.members().to_vec(),
                    condition_value,
                })
            }
            Mode::Approx | Mode::Exact => {
                let mut lp = LocalMixParams::new(args.beta, args.eps)?.with_c(args.c);
                if args.lazy {
                    lp = lp.lazy();
                }
                if args.allow_irregular {
                    lp = lp.allow_irregular();
                }
                if args.perturb {
                    lp = lp.perturbed(args.seed);
                }
                let res = if args.mode == Mode::Approx {
                    approx_local_mixing(&g, s, &lp)?
                } else {
                    exact_local_mixing(&g, s, &lp)?
                };
                LocalMixRun::Algo(AlgoRun {
                    ell: res.ell,
                    set_size: res.set_size,
                    gap: res.gap.into(),
                    grid: res.grid,
                    ledger: res.ledger.into(),
                })
            }
        };
        runs.push((s, run));
    }

    // the two run shapes never mix within one invocation
    match args.mode {
        Mode::OracleDef | Mode::OracleGrid => {
            let runs: Vec<(usize, OracleRun)> = runs
                .into_iter()
                .map(|(s, r)| match r {
                    LocalMixRun::Oracle(o) => (s, o),
                    LocalMixRun::Algo(_) => unreachable!(),
                })
                .collect();
            emit_local_mix(&g, params_echo, runs, |r| r.tau, args.json.as_deref())
        }
        _ => {
            let runs: Vec<(usize, AlgoRun)> = runs
                .into_iter()
                .map(|(s, r)| match r {
                    LocalMixRun::Algo(a) => (s, a),
                    LocalMixRun::Oracle(_) => unreachable!(),
                })
                .collect();
            emit_local_mix(&g, params_echo, runs, |r| r.ell, args.json.as_deref())
        }
    }
}

fn emit_local_mix<R: Serialize>(
    g: &Graph,
    params: LocalMixParamsEcho,
    mut runs: Vec<(usize, R)>,
    value: impl Fn(&R) -> u64,
    json: Option<&Path>,
) -> Result<(), CliError> {
    if runs.len() == 1 {
        let (source, run) = runs.pop().unwrap();
        #[derive(Serialize)]
        struct Single<R: Serialize> {
            source: usize,
            run: R,
        }
        emit(g, params, Single { source, run }, json)
    } else {
        emit(g, params, MultiSourceResult::new(runs, value), json)
    }
}

#[derive(Serialize)]
struct GossipParamsEcho {
    beta: f64,
    budget: u64,
    seeds: usize,
    base_seed: u64,
}

fn run_gossip(args: GossipArgs) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let budget = args.budget.unwrap_or(20 * g.node_count() as u64);
    if args.seeds == 0 {
        return Err(CliError::Core(CoreError::InfeasibleParams("--seeds needs >= 1".into())));
    }
    let params = GossipParamsEcho {
        beta: args.beta,
        budget,
        seeds: args.seeds,
        base_seed: args.seed,
    };
    let mut reports: Vec<SpreadReport> = Vec::new();
    for i in 0..args.seeds {
        reports.push(run_spreading(&g, args.beta, args.seed + i as u64, budget)?);
    }
    if let Some(csv) = &args.csv {
        let mut text = String::from("round,min_tokens_per_node,min_holders_per_token\n");
        for row in &reports[0].coverage {
            text.push_str(&format!(
                "{},{},{}\n",
                row.round, row.min_tokens_per_node, row.min_holders_per_token
            ));
        }
        write_text(csv, &text)?;
    }
    let successes = reports.iter().filter(|r| r.rounds_to_partial.is_some()).count();
    let mut partials: Vec<u64> = reports.iter().filter_map(|r| r.rounds_to_partial).collect();
    let mut fulls: Vec<u64> = reports.iter().filter_map(|r| r.rounds_to_full).collect();
    let result = GossipResult {
        success_fraction: successes as f64 / reports.len() as f64,
        median_rounds_to_partial: median(&mut partials),
        median_rounds_to_full: median(&mut fulls),
        runs: reports.iter().map(GossipRunEcho::from).collect(),
    };
    emit(&g, params, result, args.json.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_map_model_violations_to_2_and_caps_to_3() {
        assert_eq!(CliError::Core(CoreError::ExceededCap(99)).code(), 3);
        assert_eq!(CliError::Core(CoreError::BipartiteWithoutLazy).code(), 2);
        assert_eq!(CliError::Core(CoreError::NotRegular).code(), 2);
        assert_eq!(CliError::Core(CoreError::Parse("x".into())).code(), 2);
        assert_eq!(CliError::Io("x".into()).code(), 2);
    }

    #[test]
    fn source_samples_are_deterministic_and_distinct() {
        let a = sampled_sources(64, 20, 7);
        let b = sampled_sources(64, 20, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        let set: std::collections::BTreeSet<_> = a.iter().collect();
        assert_eq!(set.len(), 20);
        assert_eq!(sampled_sources(5, 9, 1).len(), 5);
    }
}
