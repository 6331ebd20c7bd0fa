//! `cutwidth`: bounds for the minimum cutwidth of a graph.
//!
//! Subcommands: `gen` (write an instance), `lb` (SDP lower bound), `ub`
//! (rounded and annealed upper bound), `exact` (small instances), `bench`
//! (a grid of random instances, one summary row each) and `trace` (bound per
//! iteration under several cut schedules).

mod grid;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use cutwidth_core::cuts::CutKind;
use cutwidth_core::lower_bound::{compute_lower_bound, BoundReport, DriverParams, Schedule};
use cutwidth_core::ordering::{exact_cutwidth_bruteforce, exact_cutwidth_subset_dp_with_order, Permutation};
use cutwidth_core::report::{
    bound_headers, bound_row, iteration_headers, iteration_rows, summary_headers, summary_row, time_cell, Cell,
    Format, InstanceInfo, RowWriter,
};
use cutwidth_core::sdp_solver::SolverSettings;
use cutwidth_core::upper_bound::{compute_upper_bound, AnnealParams};
use cutwidth_core::{Error, Graph};

#[derive(Parser, Debug)]
#[command(name = "cutwidth", version, about = "Lower and upper bounds for the minimum cutwidth of a graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random instance as an edge list.
    Gen(GenArgs),
    /// Semidefinite lower bound with cutting planes.
    Lb(LbArgs),
    /// Upper bound from the relaxation, improved by annealing.
    Ub(UbArgs),
    /// Exact cutwidth for small graphs.
    Exact(ExactArgs),
    /// One summary row per instance of a random grid.
    Bench(BenchArgs),
    /// Bound after every iteration, for several cut schedules.
    Trace(TraceArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Edge list file: header `n m`, then one 1-based edge per line.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// Erdős–Rényi graph G(n, p).
    #[arg(long, value_name = "N,P")]
    er: Option<String>,
    /// Random geometric graph in the unit cube with distance threshold d.
    #[arg(long, value_name = "N,D")]
    rgg: Option<String>,
}

#[derive(Args, Debug)]
struct Instance {
    #[command(flatten)]
    source: Source,
    /// Master seed for generators and all randomised steps.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug, Clone)]
struct DriverFlags {
    /// Cutting-plane iterations after the basic relaxation.
    #[arg(long, default_value_t = 7)]
    max_iter: usize,
    /// Cuts added per iteration (default 2n²).
    #[arg(long)]
    num_cuts: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    min_violation: f64,
    /// Stop once an iteration raises the bound by less than this.
    #[arg(long, default_value_t = 1e-2, allow_negative_numbers = true)]
    improvement_min: f64,
    /// Drop cuts whose dual is below this fraction of the mean dual.
    #[arg(long, default_value_t = 0.01)]
    prune_factor: f64,
    /// Wall-clock limit, checked between iterations.
    #[arg(long, value_name = "SECONDS")]
    time_limit_sec: Option<f64>,
    /// Use these cut kinds in every iteration instead of the staged schedule,
    /// e.g. `DICYCLE3,TRI1` or the groups `triangles`, `rlt`, `all`.
    #[arg(long, value_name = "LIST")]
    families: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct SolverFlags {
    /// Primal, dual and gap tolerance of the SDP solver.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    #[arg(long, default_value_t = 20_000)]
    max_solver_iter: usize,
    /// Largest n the SDP is attempted for.
    #[arg(long, default_value_t = 40)]
    max_n: usize,
}

#[derive(Args, Debug, Clone)]
struct AnnealFlags {
    #[arg(long, default_value_t = 2.0)]
    sa_t0: f64,
    #[arg(long, default_value_t = 0.98)]
    sa_cooling: f64,
    /// Move evaluations per run (default 50n²).
    #[arg(long)]
    sa_budget: Option<usize>,
    #[arg(long, default_value_t = 1)]
    sa_restarts: usize,
}

#[derive(Args, Debug, Clone)]
struct OutputFlags {
    /// Output file (default stdout).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Omit the `# ... unix=` header line.
    #[arg(long)]
    no_timestamp: bool,
    /// Leave timing columns empty, making output reproducible byte for byte.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    JsonLines,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::JsonLines => Format::JsonLines,
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LbArgs {
    #[command(flatten)]
    instance: Instance,
    #[command(flatten)]
    driver: DriverFlags,
    #[command(flatten)]
    solver: SolverFlags,
    #[command(flatten)]
    output: OutputFlags,
    /// Also write one row per iteration here.
    #[arg(long, value_name = "PATH")]
    iterations: Option<PathBuf>,
    /// Also write the full report, including the cut pool, as JSON here.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct UbArgs {
    #[command(flatten)]
    instance: Instance,
    #[command(flatten)]
    driver: DriverFlags,
    #[command(flatten)]
    solver: SolverFlags,
    #[command(flatten)]
    anneal: AnnealFlags,
    #[command(flatten)]
    output: OutputFlags,
    /// Round the basic relaxation only, without cutting planes.
    #[arg(long)]
    basic: bool,
    /// Also write the witness ordering (1-based vertices by position) here.
    #[arg(long, value_name = "PATH")]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Dynamic programming over vertex subsets (n ≤ 24).
    Dp,
    /// All orderings (n ≤ 10).
    Brute,
    /// Both, failing unless they agree.
    Both,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    method: Method,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Erdős–Rényi grid such as `20,{0.3..0.9}`; may repeat.
    #[arg(long, value_name = "GRID", num_args = 1.., action = clap::ArgAction::Append)]
    er: Vec<String>,
    /// Random geometric grid such as `{20,30},0.5`; may repeat.
    #[arg(long, value_name = "GRID", num_args = 1.., action = clap::ArgAction::Append)]
    rgg: Vec<String>,
    /// Seeds such as `1..5` or `1,4,9`.
    #[arg(long, default_value = "1")]
    seeds: String,
    /// Instances run concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    driver: DriverFlags,
    #[command(flatten)]
    solver: SolverFlags,
    #[command(flatten)]
    anneal: AnnealFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    instance: Instance,
    /// Schedules to run: `dicycle`, `triangles`, `all` (3-dicycles alone in
    /// iteration 1, then the named kinds) and `staged` (the default of `lb`).
    #[arg(long, default_value = "dicycle,triangles,all")]
    schedules: String,
    #[arg(long, default_value_t = 7)]
    max_iter: usize,
    #[arg(long)]
    num_cuts: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    min_violation: f64,
    #[arg(long, default_value_t = 0.01)]
    prune_factor: f64,
    #[command(flatten)]
    solver: SolverFlags,
    #[command(flatten)]
    output: OutputFlags,
}

/// Failure with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
    SizeCap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } => Failure::SizeCap(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Runtime(m) => (2, m),
                Failure::SizeCap(m) => (3, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Gen(a) => cmd_gen(a),
        Command::Lb(a) => cmd_lb(a),
        Command::Ub(a) => cmd_ub(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Trace(a) => cmd_trace(a),
    }
}

fn parse_pair(spec: &str, what: &str) -> CliResult<(usize, f64)> {
    let bad = || Failure::Usage(format!("--{what} expects N,VALUE, got {spec:?}"));
    let (n, v) = spec.split_once(',').ok_or_else(bad)?;
    let n = n.trim().parse::<usize>().map_err(|_| bad())?;
    let v = v.trim().parse::<f64>().map_err(|_| bad())?;
    Ok((n, v))
}

fn generate(model: Model, n: usize, param: f64, seed: u64) -> CliResult<Graph> {
    match model {
        Model::Er if (0.0..=1.0).contains(&param) => Ok(Graph::erdos_renyi(n, param, seed)),
        Model::Er => Err(Failure::Usage(format!("edge probability {param} is outside [0, 1]"))),
        Model::Rgg if param >= 0.0 => Ok(Graph::random_geometric(n, param, seed)),
        Model::Rgg => Err(Failure::Usage(format!("distance {param} is negative"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Model {
    Er,
    Rgg,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Er => "er",
            Model::Rgg => "rgg",
        }
    }
}

fn load(instance: &Instance) -> CliResult<(Graph, InstanceInfo)> {
    let s = &instance.source;
    let (graph, name, param, seed) = if let Some(path) = &s.graph {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
        let parsed = Graph::parse_edge_list(&text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        if parsed.duplicates > 0 {
            eprintln!("warning: {} duplicate edges ignored", parsed.duplicates);
        }
        let name = path.file_stem().map_or_else(|| "graph".to_string(), |s| s.to_string_lossy().into_owned());
        (parsed.graph, name, None, None)
    } else {
        let (model, spec) = match (&s.er, &s.rgg) {
            (Some(spec), _) => (Model::Er, spec),
            (_, Some(spec)) => (Model::Rgg, spec),
            _ => return Err(Failure::Usage("one of --graph, --er, --rgg is required".into())),
        };
        let (n, param) = parse_pair(spec, model.name())?;
        let graph = generate(model, n, param, instance.seed)?;
        (graph, model.name().to_string(), Some(param), Some(instance.seed))
    };
    let info = InstanceInfo {
        name,
        n: graph.n(),
        param,
        seed,
        edges: graph.edge_count(),
    };
    Ok((graph, info))
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn header_comments(output: &OutputFlags, command: &str) -> Vec<String> {
    if output.no_timestamp {
        return Vec::new();
    }
    let unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    vec![format!("cutwidth {} {command} unix={unix}", env!("CARGO_PKG_VERSION"))]
}

fn writer<'a>(
    output: &OutputFlags,
    path: Option<&Path>,
    command: &str,
    headers: &[String],
) -> CliResult<RowWriter<Box<dyn Write + 'a>>> {
    let out = open_output(path)?;
    Ok(RowWriter::new(out, output.format.into(), headers, &header_comments(output, command))?)
}

fn parse_families(list: &str) -> CliResult<Vec<CutKind>> {
    let mut kinds = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let group: Vec<CutKind> = match name.to_ascii_lowercase().as_str() {
            "all" => CutKind::ALL.to_vec(),
            "triangles" => CutKind::TRIANGLES.to_vec(),
            "rlt" => CutKind::RLT.to_vec(),
            "dicycle" => vec![CutKind::Dicycle3],
            _ => vec![CutKind::from_name(name).ok_or_else(|| Failure::Usage(format!("unknown cut kind {name:?}")))?],
        };
        for k in group {
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
    }
    if kinds.is_empty() {
        return Err(Failure::Usage("--families needs at least one cut kind".into()));
    }
    Ok(kinds)
}

fn time_limit(seconds: Option<f64>) -> CliResult<Option<Duration>> {
    seconds
        .map(|s| Duration::try_from_secs_f64(s).map_err(|_| Failure::Usage(format!("bad time limit {s}"))))
        .transpose()
}

fn driver_params(flags: &DriverFlags) -> CliResult<DriverParams> {
    let schedule = match &flags.families {
        Some(list) => Schedule::Fixed(parse_families(list)?),
        None => Schedule::Staged,
    };
    let params = DriverParams {
        max_iter: flags.max_iter,
        improvement_min: flags.improvement_min,
        num_cuts: flags.num_cuts,
        min_violation: flags.min_violation,
        prune_factor: flags.prune_factor,
        schedule,
        time_limit: time_limit(flags.time_limit_sec)?,
    };
    params.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(params)
}

fn solver_settings(flags: &SolverFlags) -> CliResult<SolverSettings> {
    let settings = SolverSettings {
        tol_primal: flags.tol,
        tol_dual: flags.tol,
        tol_gap: flags.tol,
        max_iterations: flags.max_solver_iter,
        ..SolverSettings::default()
    };
    settings.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(settings)
}

fn anneal_params(flags: &AnnealFlags) -> CliResult<AnnealParams> {
    if !(flags.sa_t0 > 0.0) || !(flags.sa_cooling > 0.0 && flags.sa_cooling <= 1.0) {
        return Err(Failure::Usage("annealing needs t0 > 0 and cooling in (0, 1]".into()));
    }
    Ok(AnnealParams {
        t0: flags.sa_t0,
        cooling: flags.sa_cooling,
        budget: flags.sa_budget,
        restarts: flags.sa_restarts.max(1),
    })
}

fn check_sdp_size(graph: &Graph, flags: &SolverFlags) -> CliResult<()> {
    if graph.n() > flags.max_n {
        return Err(Error::TooLarge { n: graph.n(), max: flags.max_n, what: "the semidefinite relaxation" }.into());
    }
    Ok(())
}

fn order_string(perm: &Permutation) -> String {
    perm.order().iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_gen(args: GenArgs) -> CliResult<()> {
    if args.instance.source.graph.is_some() {
        return Err(Failure::Usage("gen needs --er or --rgg".into()));
    }
    let (graph, _) = load(&args.instance)?;
    let mut out = open_output(args.out.as_deref())?;
    out.write_all(graph.to_edge_list().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_lb(args: LbArgs) -> CliResult<()> {
    let (graph, info) = load(&args.instance)?;
    check_sdp_size(&graph, &args.solver)?;
    let params = driver_params(&args.driver)?;
    let settings = solver_settings(&args.solver)?;
    let report = compute_lower_bound(&graph, &params, &settings, args.instance.seed)?;
    let timings = !args.output.no_timings;

    let mut w = writer(&args.output, args.output.out.as_deref(), "lb", &bound_headers())?;
    w.write_row(&bound_row(&info.name, info.edges, &report, timings))?;
    if let Some(path) = &args.iterations {
        let mut it = writer(&args.output, Some(path), "lb", &iteration_headers())?;
        for row in iteration_rows(&info.name, &schedule_name(&params.schedule), &report, timings) {
            it.write_row(&row)?;
        }
    }
    if let Some(path) = &args.report {
        write_report_json(path, &report, timings)?;
    }
    if report.bound_decreased {
        eprintln!("warning: the bound decreased by more than the solver tolerance");
    }
    Ok(())
}

fn write_report_json(path: &Path, report: &BoundReport, timings: bool) -> CliResult<()> {
    let mut report = report.clone();
    if !timings {
        report.time_sdp = 0.0;
        report.time_separation = 0.0;
        report.time_total = 0.0;
        for r in &mut report.records {
            r.solve_seconds = 0.0;
            r.separation_seconds = 0.0;
        }
    }
    let mut out = open_output(Some(path))?;
    serde_json::to_writer_pretty(&mut out, &report).map_err(|e| Failure::Runtime(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn schedule_name(schedule: &Schedule) -> String {
    match schedule {
        Schedule::Staged => "staged".into(),
        Schedule::Fixed(kinds) | Schedule::DicycleFirst(kinds) => {
            kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(" ")
        }
    }
}

fn cmd_ub(args: UbArgs) -> CliResult<()> {
    let (graph, info) = load(&args.instance)?;
    check_sdp_size(&graph, &args.solver)?;
    let mut params = driver_params(&args.driver)?;
    if args.basic {
        params.max_iter = 0;
    }
    let settings = solver_settings(&args.solver)?;
    let anneal = anneal_params(&args.anneal)?;
    let lb = compute_lower_bound(&graph, &params, &settings, args.instance.seed)?;
    let start = Instant::now();
    let ub = compute_upper_bound(&graph, &lb.final_xbar, &anneal, args.instance.seed)?;
    let time_ub = start.elapsed().as_secs_f64();
    let witness = order_string(&ub.ordering);

    let headers: Vec<String> = ["instance", "n", "edges", "UB", "rounded UB", "LB final", "lb_integer", "time UB", "witness"]
        .into_iter()
        .map(String::from)
        .collect();
    let mut w = writer(&args.output, args.output.out.as_deref(), "ub", &headers)?;
    w.write_row(&[
        Cell::from(info.name.as_str()),
        Cell::from(info.n),
        Cell::from(info.edges),
        Cell::from(ub.value),
        Cell::from(ub.rounded_value),
        Cell::Float(lb.alpha_final, 4),
        Cell::from(lb.lb_integer),
        time_cell(time_ub, !args.output.no_timings),
        Cell::from(witness.clone()),
    ])?;
    if let Some(path) = &args.witness {
        let mut out = open_output(Some(path))?;
        writeln!(out, "{witness}")?;
        out.flush()?;
    }
    if (ub.value as u64) < lb.lb_integer {
        return Err(Failure::Runtime(format!("upper bound {} is below the lower bound {}", ub.value, lb.lb_integer)));
    }
    Ok(())
}

fn cmd_exact(args: ExactArgs) -> CliResult<()> {
    let (graph, info) = load(&args.instance)?;
    let (value, order, method) = match args.method {
        Method::Dp => {
            let (v, p) = exact_cutwidth_subset_dp_with_order(&graph)?;
            (v, p, "dp")
        }
        Method::Brute => {
            let (v, p) = exact_cutwidth_bruteforce(&graph)?;
            (v, p, "brute")
        }
        Method::Both => {
            let (v, p) = exact_cutwidth_subset_dp_with_order(&graph)?;
            let (b, _) = exact_cutwidth_bruteforce(&graph)?;
            if b != v {
                return Err(Failure::Runtime(format!("subset DP gives {v} but enumeration gives {b}")));
            }
            (v, p, "both")
        }
    };
    let headers: Vec<String> = ["instance", "n", "edges", "CW", "method", "ordering"]
        .into_iter()
        .map(String::from)
        .collect();
    let mut w = writer(&args.output, args.output.out.as_deref(), "exact", &headers)?;
    w.write_row(&[
        Cell::from(info.name.as_str()),
        Cell::from(info.n),
        Cell::from(info.edges),
        Cell::from(value),
        Cell::from(method),
        Cell::from(order_string(&order)),
    ])?;
    Ok(())
}

struct Job {
    model: Model,
    n: usize,
    param: f64,
    seed: u64,
}

fn bench_jobs(args: &BenchArgs) -> CliResult<Vec<Job>> {
    let seeds = grid::expand_seeds(&args.seeds).map_err(Failure::Usage)?;
    let mut jobs = Vec::new();
    let specs = args.er.iter().map(|s| (Model::Er, s)).chain(args.rgg.iter().map(|s| (Model::Rgg, s)));
    for (model, spec) in specs {
        for (n, param) in grid::expand_grid(spec).map_err(Failure::Usage)? {
            for &seed in &seeds {
                jobs.push(Job { model, n, param, seed });
            }
        }
    }
    if jobs.is_empty() {
        return Err(Failure::Usage("bench needs at least one --er or --rgg grid".into()));
    }
    Ok(jobs)
}

fn bench_one(job: &Job, args: &BenchArgs, params: &DriverParams, settings: &SolverSettings, anneal: &AnnealParams) -> CliResult<Vec<Cell>> {
    let graph = generate(job.model, job.n, job.param, job.seed)?;
    check_sdp_size(&graph, &args.solver)?;
    let lb = compute_lower_bound(&graph, params, settings, job.seed)?;
    let start = Instant::now();
    let ub = compute_upper_bound(&graph, &lb.final_xbar, anneal, job.seed)?;
    let time_ub = start.elapsed().as_secs_f64();
    let info = InstanceInfo {
        name: job.model.name().to_string(),
        n: graph.n(),
        param: Some(job.param),
        seed: Some(job.seed),
        edges: graph.edge_count(),
    };
    if lb.bound_decreased {
        eprintln!("warning: bound decreased on {} n={} param={} seed={}", info.name, info.n, job.param, job.seed);
    }
    Ok(summary_row(&info, &lb, ub.value as u64, time_ub, !args.output.no_timings))
}

fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    let jobs = bench_jobs(&args)?;
    let params = driver_params(&args.driver)?;
    let settings = solver_settings(&args.solver)?;
    let anneal = anneal_params(&args.anneal)?;
    let param_name = match (args.er.is_empty(), args.rgg.is_empty()) {
        (false, true) => "p",
        (true, false) => "d",
        _ => "param",
    };
    let mut w = writer(&args.output, args.output.out.as_deref(), "bench", &summary_headers(param_name))?;
    // Chunks of `jobs` instances run side by side; rows are written in grid
    // order as each chunk completes.
    for chunk in jobs.chunks(args.jobs.max(1)) {
        let rows: Vec<CliResult<Vec<Cell>>> = if chunk.len() == 1 {
            vec![bench_one(&chunk[0], &args, &params, &settings, &anneal)]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunk
                    .iter()
                    .map(|job| scope.spawn(|| bench_one(job, &args, &params, &settings, &anneal)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().unwrap_or_else(|_| Err(Failure::Runtime("worker panicked".into()))))
                    .collect()
            })
        };
        for row in rows {
            w.write_row(&row?)?;
        }
    }
    Ok(())
}

fn trace_schedule(name: &str) -> CliResult<Schedule> {
    let mut triangles = vec![CutKind::Dicycle3];
    triangles.extend(CutKind::TRIANGLES);
    match name {
        "dicycle" => Ok(Schedule::Fixed(vec![CutKind::Dicycle3])),
        "triangles" => Ok(Schedule::DicycleFirst(triangles)),
        "all" => Ok(Schedule::DicycleFirst(CutKind::ALL.to_vec())),
        "staged" => Ok(Schedule::Staged),
        other => Err(Failure::Usage(format!("unknown schedule {other:?}"))),
    }
}

fn cmd_trace(args: TraceArgs) -> CliResult<()> {
    let (graph, info) = load(&args.instance)?;
    check_sdp_size(&graph, &args.solver)?;
    let settings = solver_settings(&args.solver)?;
    let names: Vec<&str> = args.schedules.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let schedules = names.iter().map(|n| trace_schedule(n)).collect::<CliResult<Vec<_>>>()?;
    let mut w = writer(&args.output, args.output.out.as_deref(), "trace", &iteration_headers())?;
    for (name, schedule) in names.iter().zip(schedules) {
        // Every curve runs the full number of iterations.
        let params = DriverParams {
            max_iter: args.max_iter,
            improvement_min: f64::NEG_INFINITY,
            num_cuts: args.num_cuts,
            min_violation: args.min_violation,
            prune_factor: args.prune_factor,
            schedule,
            time_limit: None,
        };
        let report = compute_lower_bound(&graph, &params, &settings, args.instance.seed)?;
        for row in iteration_rows(&info.name, name, &report, !args.output.no_timings) {
            w.write_row(&row)?;
        }
    }
    Ok(())
}
