//! `bdmbt`: generate, solve, verify, reduce, and certify broadcast-time
//! instances over small text files.
//!
//! Exit codes are part of the contract: 0 success (valid / decided
//! yes), 1 negative answer (invalid schedule / decided no / bound
//! exceeded), 2 malformed input or usage error, 3 node budget
//! exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bdmbt_core::{
    broadcast_time_exact, broadcast_time_graph, build_reduction, canonical_a_schedule, certify,
    cycle_graph, decide_bdmbt, extract_assignment, greedy_schedule, path_graph, target_time,
    verify_schedule, Assignment, CnfFormula, Graph, ReductionMap, Schedule, SolverConfig,
    SolverError,
};

const EXIT_NO: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Label carried by reduction roots; used as the default source.
const ROOT_LABEL: &str = "r:1:1";

#[derive(Parser)]
#[command(name = "bdmbt", version, about = "Broadcast-time tools in the telephone model")]
struct Cli {
    /// Cap on solver search expansions (default 100000000; the
    /// BDMBT_NODE_BUDGET environment variable overrides the default).
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate graph families.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compute the broadcast time of a source (or of the whole graph).
    Solve(SolveArgs),
    /// Decide whether the source can broadcast within k rounds.
    Decide(DecideArgs),
    /// Check a schedule against a graph.
    Verify(VerifyArgs),
    /// Compile a DIMACS CNF formula into a broadcast instance.
    Reduce(ReduceArgs),
    /// Build the certificate schedule for a satisfying assignment.
    Certify(CertifyArgs),
    /// Read an assignment back off a certificate schedule.
    Extract(ExtractArgs),
    /// Produce a (valid, not necessarily optimal) greedy schedule.
    Heuristic(HeuristicArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// The n-row relay tree on n^2 vertices.
    #[command(name = "a-tree")]
    ATree {
        #[arg(long)]
        n: usize,
        /// Graph file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the canonical optimal schedule from the root.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Path on n vertices.
    Path {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cycle on n >= 3 vertices.
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Source vertex; defaults to the vertex labeled r:1:1.
    #[arg(long, conflicts_with = "all")]
    source: Option<usize>,
    /// Maximize over all sources (prints b(G)).
    #[arg(long)]
    all: bool,
    /// Stop deepening past this bound; exit 1 if no schedule meets it.
    #[arg(long)]
    upper: Option<u32>,
    /// Write the witness schedule here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DecideArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    source: Option<usize>,
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long)]
    deadline: Option<u32>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    cnf: PathBuf,
    /// Output graph file.
    #[arg(short, long)]
    output: PathBuf,
    /// Output vertex-name map file.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    cnf: PathBuf,
    /// Signed-integer assignment, e.g. `1,-2,3`.
    #[arg(long)]
    assignment: String,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args)]
struct HeuristicArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    source: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match solver_config(cli.node_budget) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(EXIT_MALFORMED);
        }
    };
    match run(cli.command, &config) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let budget_hit = err
                .chain()
                .any(|cause| matches!(cause.downcast_ref(), Some(SolverError::BudgetExceeded { .. })));
            ExitCode::from(if budget_hit { EXIT_BUDGET } else { EXIT_MALFORMED })
        }
    }
}

fn solver_config(flag: Option<u64>) -> Result<SolverConfig> {
    let mut config = SolverConfig::default();
    if let Ok(text) = std::env::var("BDMBT_NODE_BUDGET") {
        config.node_budget = text
            .parse()
            .map_err(|_| anyhow!("BDMBT_NODE_BUDGET must be a positive integer, got `{text}`"))?;
    }
    if let Some(budget) = flag {
        config.node_budget = budget;
    }
    if config.node_budget == 0 {
        bail!("node budget must be positive");
    }
    Ok(config)
}

fn run(command: Command, config: &SolverConfig) -> Result<u8> {
    match command {
        Command::Gen(gen) => run_gen(gen),
        Command::Solve(args) => run_solve(args, config),
        Command::Decide(args) => run_decide(args, config),
        Command::Verify(args) => run_verify(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Certify(args) => run_certify(args),
        Command::Extract(args) => run_extract(args),
        Command::Heuristic(args) => run_heuristic(args),
    }
}

fn run_gen(gen: GenCommand) -> Result<u8> {
    match gen {
        GenCommand::ATree { n, output, schedule } => {
            let at = bdmbt_core::build_a_tree(n)?;
            emit(output.as_deref(), &at.graph.to_text())?;
            if let Some(path) = schedule {
                let canonical = canonical_a_schedule(n)?;
                write_file(&path, &canonical.to_text())?;
            }
        }
        GenCommand::Path { n, output } => {
            if n == 0 {
                bail!("a path needs at least 1 vertex");
            }
            emit(output.as_deref(), &path_graph(n).to_text())?;
        }
        GenCommand::Cycle { n, output } => {
            if n < 3 {
                bail!("a cycle needs at least 3 vertices");
            }
            emit(output.as_deref(), &cycle_graph(n).to_text())?;
        }
    }
    Ok(0)
}

fn run_solve(args: SolveArgs, config: &SolverConfig) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    distinct_paths(&[Some(&args.graph), args.output.as_deref()])?;
    if args.all {
        let b = broadcast_time_graph(&graph, config)?;
        println!("{b}");
        return Ok(0);
    }
    let source = resolve_source(&graph, args.source)?;
    let start = bdmbt_core::lower_bound(&graph, source)?;
    if let Some(upper) = args.upper {
        // Bounded solve: report failure instead of deepening forever.
        let mut best = None;
        let mut nodes = 0;
        for k in start..=upper {
            let decision = decide_bdmbt(&graph, source, k, config)?;
            nodes += decision.nodes_explored;
            if let Some(witness) = decision.witness {
                best = Some((k, witness));
                break;
            }
        }
        eprintln!("explored {nodes} nodes");
        match best {
            Some((b, witness)) => {
                println!("{b}");
                if let Some(path) = args.output {
                    write_file(&path, &witness.to_text())?;
                }
                Ok(0)
            }
            None => {
                println!("> {upper}");
                Ok(EXIT_NO)
            }
        }
    } else {
        let result = broadcast_time_exact(&graph, source, config)?;
        eprintln!("explored {} nodes", result.nodes_explored);
        println!("{}", result.broadcast_time);
        if let Some(path) = args.output {
            write_file(&path, &result.witness.to_text())?;
        }
        Ok(0)
    }
}

fn run_decide(args: DecideArgs, config: &SolverConfig) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let source = resolve_source(&graph, args.source)?;
    let decision = decide_bdmbt(&graph, source, args.k, config)?;
    eprintln!("explored {} nodes", decision.nodes_explored);
    if decision.feasible() {
        println!("yes: b({source}) <= {}", args.k);
        Ok(0)
    } else {
        println!("no: b({source}) > {}", args.k);
        Ok(EXIT_NO)
    }
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    let schedule = read_schedule(&args.schedule)?;
    let report = verify_schedule(&graph, &schedule, args.deadline)
        .with_context(|| format!("schedule {} does not fit the graph", args.schedule.display()))?;
    match (&report.failure, report.completion_time) {
        (None, Some(completion)) => {
            println!("valid: completion_time={completion}");
            Ok(0)
        }
        (Some(violation), completion) => {
            match completion {
                Some(completion) => {
                    println!("invalid: {violation} (completed at {completion})")
                }
                None => println!("invalid: {violation}"),
            }
            Ok(EXIT_NO)
        }
        (None, None) => unreachable!("valid reports always carry a completion time"),
    }
}

fn run_reduce(args: ReduceArgs) -> Result<u8> {
    distinct_paths(&[Some(&args.cnf), Some(&args.output), Some(&args.map)])?;
    let cnf = read_cnf(&args.cnf)?;
    let (graph, map) = build_reduction(&cnf);
    write_file(&args.output, &graph.to_text())?;
    write_file(&args.map, &map.to_text())?;
    println!("{}", target_time(&cnf));
    Ok(0)
}

fn run_certify(args: CertifyArgs) -> Result<u8> {
    distinct_paths(&[Some(&args.cnf), Some(&args.output)])?;
    let cnf = read_cnf(&args.cnf)?;
    let assignment = Assignment::from_signed_str(&args.assignment, cnf.num_vars())?;
    let schedule = certify(&cnf, &assignment)?;
    write_file(&args.output, &schedule.to_text())?;
    println!("{}", target_time(&cnf));
    Ok(0)
}

fn run_extract(args: ExtractArgs) -> Result<u8> {
    let schedule = read_schedule(&args.schedule)?;
    let text = fs::read_to_string(&args.map)
        .with_context(|| format!("reading {}", args.map.display()))?;
    let map = ReductionMap::from_text(&text)
        .with_context(|| format!("parsing {}", args.map.display()))?;
    let assignment = extract_assignment(&schedule, &map)?;
    println!("{}", assignment.to_signed_string());
    Ok(0)
}

fn run_heuristic(args: HeuristicArgs) -> Result<u8> {
    let graph = read_graph(&args.graph)?;
    distinct_paths(&[Some(&args.graph), Some(&args.output)])?;
    let source = resolve_source(&graph, args.source)?;
    let schedule = greedy_schedule(&graph, source)?;
    let report = verify_schedule(&graph, &schedule, None)?;
    let completion = report
        .completion_time
        .expect("greedy schedules always verify");
    write_file(&args.output, &schedule.to_text())?;
    println!("{completion}");
    Ok(0)
}

fn resolve_source(graph: &Graph, flag: Option<usize>) -> Result<usize> {
    if let Some(source) = flag {
        return Ok(source);
    }
    graph.vertex_with_label(ROOT_LABEL).ok_or_else(|| {
        anyhow!("no --source given and no vertex labeled {ROOT_LABEL} in the graph")
    })
}

fn distinct_paths(paths: &[Option<&Path>]) -> Result<()> {
    let given: Vec<&Path> = paths.iter().flatten().copied().collect();
    for (i, a) in given.iter().enumerate() {
        for b in &given[i + 1..] {
            if a == b {
                bail!("path {} used for both input and output", a.display());
            }
        }
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_schedule(path: &Path) -> Result<Schedule> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Schedule::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_cnf(path: &Path) -> Result<CnfFormula> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CnfFormula::parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
