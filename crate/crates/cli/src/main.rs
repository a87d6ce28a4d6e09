use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use backbone::centrality::{edge_betweenness_log, BenefitMode};
use backbone::io::{self, Algorithm, LabeledGraph, RunReport, SweepVariant};
use backbone::landmarks::default_landmark_count;
use backbone::workload::{self, EndpointDist, TrafficSpec, VolumeDist};
use backbone::{Budget, GreedyOptions, TrafficLog};

#[derive(Parser)]
#[command(name = "backbone", version, about = "Budget-constrained traffic backbones for weighted networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one backbone and write report.json, backbone.tsv and vertices.tsv
    Run(RunArgs),
    /// Stretch against budget for several variants, as CSV
    Sweep(SweepArgs),
    /// Generate a synthetic traffic log for a graph
    GenTraffic(GenTrafficArgs),
    /// Generate a random or grid graph
    GenGraph(GenGraphArgs),
    /// Build the set cover reduction instance
    GadgetSetcover(GadgetArgs),
    /// Build the two-hub instance and check whether the bridge is selected
    Fig2(Fig2Args),
    /// Traffic-log edge betweenness scores
    Centrality(CentralityArgs),
    /// Write a backbone as GeoJSON line strings
    ExportGeojson(GeoArgs),
    /// Score an externally produced edge list as a backbone
    Eval(EvalArgs),
}

#[derive(Args)]
struct Inputs {
    /// Edge list, `u v cost` per line
    #[arg(long)]
    graph: PathBuf,
    /// Traffic log, `s t w` per line
    #[arg(long)]
    log: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Benefit {
    Uniform,
    Eb,
}

impl From<Benefit> for BenefitMode {
    fn from(b: Benefit) -> Self {
        match b {
            Benefit::Uniform => BenefitMode::Uniform,
            Benefit::Eb => BenefitMode::EdgeBetweenness,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Greedy,
    Baseline,
    Spanner,
}

#[derive(Args)]
struct GreedyFlags {
    #[arg(long, value_enum, default_value = "eb")]
    benefit: Benefit,
    /// Landmark count; 0 disables the landmark variant, `auto` uses ceil(sqrt n)
    #[arg(long, default_value = "0")]
    landmarks: String,
    #[arg(long)]
    no_cc_prune: bool,
    #[arg(long)]
    no_lb_prune: bool,
    /// Keep scanning cheaper candidates when the best one does not fit
    #[arg(long)]
    allow_overrun_skip: bool,
}

impl GreedyFlags {
    fn options(&self, n: usize) -> Result<GreedyOptions> {
        Ok(GreedyOptions {
            benefit: self.benefit.into(),
            cc_pruning: !self.no_cc_prune,
            lb_pruning: !self.no_lb_prune,
            landmarks: parse_landmarks(&self.landmarks, n)?,
            stop_on_overrun: !self.allow_overrun_skip,
            smoothing: None,
        })
    }
}

fn parse_landmarks(s: &str, n: usize) -> Result<usize> {
    if s == "auto" {
        return Ok(default_landmark_count(n));
    }
    s.parse().with_context(|| format!("invalid landmark count `{s}`"))
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Absolute cost `N` or percentage of total cost `N%`
    #[arg(long)]
    budget: Budget,
    #[arg(long, value_enum, default_value = "greedy")]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    greedy: GreedyFlags,
    /// Stretch bound for the spanner
    #[arg(long, default_value_t = 2.0)]
    spanner_k: f64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Comma-separated budget percentages
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30,35,40,45,50,55,60,65,70,75,80,85,90,95,100")]
    budgets: Vec<f64>,
    /// Comma-separated variants: greedy, greedy-eb, greedy-eb-landmarks, baseline
    #[arg(long, value_delimiter = ',', default_value = "greedy,greedy-eb,greedy-eb-landmarks,baseline")]
    variants: Vec<String>,
    /// Landmark count for the landmark variant; `auto` uses ceil(sqrt n)
    #[arg(long, default_value = "auto")]
    landmarks: String,
    #[arg(long)]
    no_cc_prune: bool,
    #[arg(long)]
    no_lb_prune: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    Uniform,
    PowerLaw,
}

#[derive(Args)]
struct GenTrafficArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "power-law")]
    volumes: DistArg,
    #[arg(long, value_enum, default_value = "uniform")]
    endpoints: DistArg,
    #[arg(long, default_value_t = workload::DEFAULT_ALPHA)]
    alpha: f64,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Grid,
    Random,
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long, value_enum)]
    kind: GraphKind,
    /// Grid rows, or vertex count for random graphs
    #[arg(long)]
    size: usize,
    /// Grid columns, or extra chords for random graphs
    #[arg(long)]
    extra: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GadgetArgs {
    /// Set cover instance: header `universe k`, then one subset per line
    #[arg(long)]
    input: PathBuf,
    /// Give element edges a small positive cost
    #[arg(long)]
    separated: bool,
    /// Also run the exhaustive optimum at budget k
    #[arg(long)]
    solve: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct Fig2Args {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Defaults to the cost of serving every pair around the bridge
    #[arg(long)]
    budget: Option<Budget>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct CentralityArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GeoArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `label lat lon` per line
    #[arg(long)]
    coords: PathBuf,
    #[arg(long)]
    backbone: PathBuf,
    /// Emit every graph edge, flagging backbone membership
    #[arg(long)]
    all_edges: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Edge list naming the backbone edges
    #[arg(long)]
    backbone: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(inputs: &Inputs) -> Result<(LabeledGraph, TrafficLog)> {
    let lg = io::parse_edge_list(&read(&inputs.graph)?).with_context(|| format!("in {}", inputs.graph.display()))?;
    let log = io::parse_traffic_log(&read(&inputs.log)?, &lg).with_context(|| format!("in {}", inputs.log.display()))?;
    Ok((lg, log))
}

fn run(args: RunArgs) -> Result<()> {
    let (lg, log) = load(&args.inputs)?;
    let opts = args.greedy.options(lg.graph.vertex_count())?;
    let algorithm = match args.algorithm {
        AlgorithmArg::Greedy => Algorithm::Greedy(opts.benefit),
        AlgorithmArg::Baseline => Algorithm::Baseline,
        AlgorithmArg::Spanner => Algorithm::Spanner(args.spanner_k),
    };
    let start = Instant::now();
    let bb = io::run_algorithm(&lg.graph, &log, args.budget, algorithm, &opts)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let mut name = algorithm.name();
    if opts.landmarks > 0 && matches!(algorithm, Algorithm::Greedy(_)) {
        name = format!("{name}-landmarks{}", opts.landmarks);
    }
    let report = RunReport::new(&name, &lg, &log, &bb, ms);
    write(&args.out_dir.join("report.json"), &report.to_json())?;
    write(&args.out_dir.join("backbone.tsv"), &io::write_edge_list(&lg, Some(&bb.edges)))?;
    write(&args.out_dir.join("vertices.tsv"), &io::write_vertex_map(&lg))?;
    println!(
        "{name}: lambda={} edges={}/{} spent={}/{} iterations={}",
        io::format_float(report.lambda),
        report.edge_count,
        lg.graph.edge_count(),
        report.spent,
        report.resolved_budget,
        report.iterations
    );
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let (lg, log) = load(&args.inputs)?;
    let l = parse_landmarks(&args.landmarks, lg.graph.vertex_count())?;
    let variants = args
        .variants
        .iter()
        .map(|v| match v.as_str() {
            "greedy" => Ok(SweepVariant::Greedy),
            "greedy-eb" => Ok(SweepVariant::GreedyEb),
            "greedy-eb-landmarks" => Ok(SweepVariant::GreedyEbLandmarks(l)),
            "baseline" => Ok(SweepVariant::Baseline),
            other => bail!("unknown variant `{other}`"),
        })
        .collect::<Result<Vec<_>>>()?;
    let base = GreedyOptions { cc_pruning: !args.no_cc_prune, lb_pruning: !args.no_lb_prune, ..GreedyOptions::default() };
    let rows = io::sweep(&lg.graph, &log, &args.budgets, &variants, &base)?;
    let csv = io::sweep_csv(&rows);
    write(&args.out_dir.join("sweep.csv"), &csv)?;
    print!("{csv}");
    Ok(())
}

fn gen_traffic(args: GenTrafficArgs) -> Result<()> {
    let lg = io::parse_edge_list(&read(&args.graph)?)?;
    let volume = match args.volumes {
        DistArg::PowerLaw => VolumeDist::PowerLaw { alpha: args.alpha },
        DistArg::Uniform => VolumeDist::Uniform { lo: 1.0, hi: 1.0 },
    };
    let endpoints = match args.endpoints {
        DistArg::PowerLaw => EndpointDist::PowerLaw { alpha: args.alpha },
        DistArg::Uniform => EndpointDist::Uniform,
    };
    let log = workload::generate_traffic(&lg.graph, &TrafficSpec { pairs: args.pairs, volume, endpoints, seed: args.seed })?;
    emit(args.out.as_deref(), &io::write_traffic_log(&log, &lg))
}

fn gen_graph(args: GenGraphArgs) -> Result<()> {
    let g = match args.kind {
        GraphKind::Grid => workload::grid_graph(args.size, args.extra, 4, args.seed),
        GraphKind::Random => workload::random_connected_graph(args.size, args.extra, 9, args.seed),
    };
    emit(args.out.as_deref(), &io::write_edge_list(&LabeledGraph::numbered(g), None))
}

fn gadget(args: GadgetArgs) -> Result<()> {
    let sc = io::parse_set_cover(&read(&args.input)?)?;
    let inst = if args.separated { workload::setcover_gadget_separated(&sc)? } else { workload::setcover_gadget(&sc)? };
    let lg = LabeledGraph::numbered(inst.graph.clone());
    write(&args.out_dir.join("graph.tsv"), &io::write_edge_list(&lg, None))?;
    write(&args.out_dir.join("log.tsv"), &io::write_traffic_log(&inst.log, &lg))?;
    println!("budget {}", inst.budget);
    if args.solve {
        let opt = workload::oracle_optimal_backbone(&inst.graph, &inst.log, inst.budget)?;
        println!("cover of size <= {}: {}", sc.k, workload::set_cover_feasible(&sc));
        println!("optimal stretch at budget: {}", io::format_float(opt.lambda));
    }
    Ok(())
}

fn fig2(args: Fig2Args) -> Result<()> {
    let inst = workload::figure2_instance(args.n, args.m)?;
    let budget = args.budget.unwrap_or(Budget::Absolute(inst.detour_forest_cost));
    let bb = backbone::greedy_backbone(&inst.graph, &inst.log, budget, &GreedyOptions::greedy_eb())?;
    let lg = LabeledGraph::numbered(inst.graph.clone());
    write(&args.out_dir.join("graph.tsv"), &io::write_edge_list(&lg, None))?;
    write(&args.out_dir.join("log.tsv"), &io::write_traffic_log(&inst.log, &lg))?;
    write(&args.out_dir.join("backbone.tsv"), &io::write_edge_list(&lg, Some(&bb.edges)))?;
    let scores = edge_betweenness_log(&inst.graph, &inst.log);
    println!("budget {budget}: lambda={} bridge-selected={}", io::format_float(bb.lambda()), bb.edges.contains(inst.bridge));
    println!("bridge score {} is maximal: {}", scores.get(inst.bridge), scores.argmax() == Some(inst.bridge));
    Ok(())
}

fn centrality(args: CentralityArgs) -> Result<()> {
    let (lg, log) = load(&args.inputs)?;
    let scores = edge_betweenness_log(&lg.graph, &log);
    emit(args.out.as_deref(), &io::write_scores(&lg, &scores.scores))
}

fn export_geojson(args: GeoArgs) -> Result<()> {
    let lg = io::parse_edge_list(&read(&args.graph)?)?;
    let coords = io::parse_coordinates(&read(&args.coords)?, &lg)?;
    let subset = io::parse_edge_subset(&read(&args.backbone)?, &lg)?;
    let value = io::export_geojson(&lg, &coords, &subset, args.all_edges)?;
    emit(args.out.as_deref(), &(serde_json::to_string_pretty(&value)? + "\n"))
}

fn eval(args: EvalArgs) -> Result<()> {
    let (lg, log) = load(&args.inputs)?;
    let subset = io::parse_edge_subset(&read(&args.backbone)?, &lg).with_context(|| format!("in {}", args.backbone.display()))?;
    let start = Instant::now();
    let bb = io::evaluate_subset(&lg.graph, &log, subset)?;
    let report = RunReport::new("eval", &lg, &log, &bb, start.elapsed().as_secs_f64() * 1e3);
    emit(args.out.as_deref(), &(report.to_json() + "\n"))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::GenTraffic(a) => gen_traffic(a),
        Command::GenGraph(a) => gen_graph(a),
        Command::GadgetSetcover(a) => gadget(a),
        Command::Fig2(a) => fig2(a),
        Command::Centrality(a) => centrality(a),
        Command::ExportGeojson(a) => export_geojson(a),
        Command::Eval(a) => eval(a),
    }
}
