//! The `sepool` command line.
//!
//! Data goes to files or standard output, diagnostics to standard error.
//! Exit status is 0 on success, 1 on a runtime failure and 2 on bad usage.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bench::run_bench;
use crate::entropy::{one_dimensional_entropy, structural_entropy};
use crate::error::SepError;
use crate::graph::{
    edge_list_string, features_csv_string, load_edge_list, load_features_csv, make_grid, make_ring,
    random_graph, FeatureMatrix, Graph,
};
use crate::pooling::{
    assignment_to_matrix_market, assignments_from_tree, assignments_to_csv, pool_with,
    pooled_edge_list, round_trip_features, Aggregation, ClusterAssignment, PoolingLevel,
};
use crate::tree::{brute_force_optimal, build_coding_tree_traced, CodingTree, BRUTE_FORCE_MAX_NODES};

#[derive(Debug, Parser)]
#[command(name = "sepool", version, about = "Structural-entropy coding trees and graph pooling")]
pub struct Cli {
    /// Suppress progress notes on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a coding tree and write it with its assignment matrices.
    Tree(TreeArgs),
    /// Structural entropy of a graph on a built (or given) coding tree.
    Entropy(EntropyArgs),
    /// Pool a graph (and optional features) through every level.
    Pool(PoolArgs),
    /// Feature reconstruction error through the hierarchy.
    Reconstruct(ReconstructArgs),
    /// Generate a synthetic graph.
    Synth(SynthArgs),
    /// Time builds on a ladder of random graphs.
    Bench(BenchArgs),
    /// Compare the greedy tree with the exhaustive optimum on a small graph.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct Source {
    /// Edge-list file.
    #[arg(long, conflicts_with = "input_dir")]
    input: Option<PathBuf>,
    /// Directory of edge-list files (`*.edges` or `*.txt`), processed in parallel.
    #[arg(long)]
    input_dir: Option<PathBuf>,
    /// Ignore a third column and give every edge weight 1.
    #[arg(long)]
    unweighted: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Mm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggArg {
    Sum,
    Mean,
}

impl From<AggArg> for Aggregation {
    fn from(a: AggArg) -> Self {
        match a {
            AggArg::Sum => Aggregation::Sum,
            AggArg::Mean => Aggregation::Mean,
        }
    }
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[command(flatten)]
    source: Source,
    /// Tree height k (> 1).
    #[arg(long)]
    height: usize,
    /// Tree JSON path, or an output directory with --input-dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Assignment matrix format written next to the tree.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    #[command(flatten)]
    source: Source,
    /// Tree height k; 1 evaluates the one-level star tree.
    #[arg(long, default_value_t = 2)]
    height: usize,
    /// Evaluate this tree JSON instead of building one.
    #[arg(long, conflicts_with = "input_dir")]
    tree: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PoolArgs {
    #[command(flatten)]
    source: Source,
    /// Node feature CSV, one row per node.
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    height: usize,
    #[arg(long, value_enum, default_value = "sum")]
    agg: AggArg,
    /// Output directory for pooled levels and assignments.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Shape {
    Ring,
    Grid,
    Gnp,
}

/// Shapes that come with coordinate features.
#[derive(Debug, Clone, Copy, ValueEnum)]
enum Layout {
    Ring,
    Grid,
}

impl From<Layout> for Shape {
    fn from(l: Layout) -> Self {
        match l {
            Layout::Ring => Shape::Ring,
            Layout::Grid => Shape::Grid,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    #[command(flatten)]
    source: Source,
    /// Node feature CSV (required with --input).
    #[arg(long)]
    features: Option<PathBuf>,
    /// Use a built-in ring or grid with coordinate features instead of files.
    #[arg(long, value_enum, conflicts_with_all = ["input", "input_dir"])]
    synth: Option<Layout>,
    /// Ring size, or grid width.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Grid rows (defaults to --n).
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long, default_value_t = 2)]
    height: usize,
    #[arg(long, value_enum, default_value = "mean")]
    agg: AggArg,
    /// Number of random equal-size partitions in the baseline.
    #[arg(long, default_value_t = 100)]
    baseline: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the reconstructed features as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: Shape,
    /// Ring size, grid width, or node count.
    #[arg(long)]
    n: usize,
    /// Grid rows (defaults to --n).
    #[arg(long)]
    rows: Option<usize>,
    /// Edge probability for `gnp`.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix: writes PREFIX.edges and, for ring and grid, PREFIX.csv.
    /// Without it the edge list goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 2000, 4000, 8000, 16000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 8.0)]
    degree: f64,
    #[arg(long, default_value_t = 3)]
    height: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// `json` report or `csv` table.
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = 2)]
    height: usize,
}

/// A failure tagged with the stage that produced it.
#[derive(Debug)]
struct Failure {
    stage: &'static str,
    error: SepError,
}

type Outcome<T> = std::result::Result<T, Failure>;

trait Stage<T> {
    fn at(self, stage: &'static str) -> Outcome<T>;
}

impl<T> Stage<T> for crate::Result<T> {
    fn at(self, stage: &'static str) -> Outcome<T> {
        self.map_err(|error| Failure { stage, error })
    }
}

fn usage(stage: &'static str, msg: impl Into<String>) -> Failure {
    Failure {
        stage,
        error: SepError::Domain(msg.into()),
    }
}

struct Ctx {
    quiet: bool,
    human: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("sepool: {}", msg.as_ref());
        }
    }
}

/// Runs the CLI on the process arguments and returns the exit status.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let ctx = Ctx {
        quiet: cli.quiet,
        human: cli.human,
    };
    let result = match cli.command {
        Command::Tree(a) => cmd_tree(&ctx, a),
        Command::Entropy(a) => cmd_entropy(&ctx, a),
        Command::Pool(a) => cmd_pool(&ctx, a),
        Command::Reconstruct(a) => cmd_reconstruct(&ctx, a),
        Command::Synth(a) => cmd_synth(&ctx, a),
        Command::Bench(a) => cmd_bench(&ctx, a),
        Command::Oracle(a) => cmd_oracle(&ctx, a),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("sepool: error during {}: {}", f.stage, f.error);
            1
        }
    }
}

fn require_height(k: usize) -> Outcome<()> {
    if k <= 1 {
        return Err(usage(
            "argument check",
            format!("--height must be greater than 1 (k > 1), got {k}"),
        ));
    }
    Ok(())
}

fn write(path: &Path, contents: &str) -> Outcome<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| SepError::io(dir, e)).at("write output")?;
    }
    fs::write(path, contents).map_err(|e| SepError::io(path, e)).at("write output")
}

fn emit(ctx: &Ctx, value: &Value, human: impl FnOnce() -> String) {
    if ctx.human {
        println!("{}", human());
    } else {
        println!("{value}");
    }
}

fn load(path: &Path, unweighted: bool) -> Outcome<Graph> {
    load_edge_list(path, !unweighted).at("load graph")
}

/// Input files in a batch directory, sorted by name.
fn batch_inputs(dir: &Path) -> Outcome<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| SepError::io(dir, e)).at("read input directory")?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| SepError::io(dir, e)).at("read input directory")?.path();
        let ext = path.extension().and_then(|e| e.to_str());
        if path.is_file() && matches!(ext, Some("edges") | Some("txt")) {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(usage("read input directory", format!("no *.edges or *.txt files in {}", dir.display())));
    }
    Ok(files)
}

fn thread_pool() -> Outcome<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("SEP_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage("argument check", format!("SEP_THREADS must be a positive integer, got {raw:?}")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| usage("thread pool setup", e.to_string()))
}

/// Runs `job` on the single input or on every file of the batch directory.
/// Batch results come back in file-name order; the first failure wins.
fn for_each_input<R: Send>(
    ctx: &Ctx,
    source: &Source,
    job: impl Fn(&Path, Graph) -> Outcome<R> + Sync,
) -> Outcome<Vec<R>> {
    match (&source.input, &source.input_dir) {
        (Some(path), None) => Ok(vec![job(path, load(path, source.unweighted)?)?]),
        (None, Some(dir)) => {
            let files = batch_inputs(dir)?;
            ctx.note(format!("processing {} graphs from {}", files.len(), dir.display()));
            let pool = thread_pool()?;
            let results: Vec<Outcome<R>> = pool.install(|| {
                files
                    .par_iter()
                    .map(|p| load(p, source.unweighted).and_then(|g| job(p, g)))
                    .collect()
            });
            results.into_iter().collect()
        }
        _ => Err(usage("argument check", "one of --input or --input-dir is required")),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".into())
}

fn write_assignments(base: &Path, format: Format, s: &[ClusterAssignment]) -> Outcome<Vec<PathBuf>> {
    let dir = base.parent().map(Path::to_path_buf).unwrap_or_default();
    let name = stem(base);
    let mut written = Vec::new();
    match format {
        Format::Csv => {
            let p = dir.join(format!("{name}.assign.csv"));
            write(&p, &assignments_to_csv(s))?;
            written.push(p);
        }
        Format::Json => {
            let p = dir.join(format!("{name}.assign.json"));
            let mut text = serde_json::to_string_pretty(s).map_err(SepError::from).at("serialize assignments")?;
            text.push('\n');
            write(&p, &text)?;
            written.push(p);
        }
        Format::Mm => {
            for si in s {
                let p = dir.join(format!("{name}.S{}.mtx", si.level()));
                write(&p, &assignment_to_matrix_market(si))?;
                written.push(p);
            }
        }
    }
    Ok(written)
}

fn level_sizes(s: &[ClusterAssignment]) -> Vec<usize> {
    s.iter().map(ClusterAssignment::rows).collect()
}

fn cmd_tree(ctx: &Ctx, a: TreeArgs) -> Outcome<()> {
    require_height(a.height)?;
    let batch = a.source.input_dir.is_some();
    let summaries = for_each_input(ctx, &a.source, |path, graph| {
        let (tree, trace) = build_coding_tree_traced(&graph, a.height).at("build tree")?;
        let entropy = structural_entropy(&graph, &tree).at("compute entropy")?.total;
        let s = assignments_from_tree(&tree).at("derive assignments")?;
        let mut files = Vec::new();
        if let Some(out) = &a.out {
            let tree_path = if batch {
                out.join(format!("{}.tree.json", stem(path)))
            } else {
                out.clone()
            };
            write(&tree_path, &tree.to_json().at("serialize tree")?)?;
            files.push(tree_path.clone());
            files.extend(write_assignments(&tree_path, a.format, &s)?);
        }
        Ok(json!({
            "input": path.display().to_string(),
            "nodes": graph.node_count(),
            "edges": graph.edge_count(),
            "height": tree.height(),
            "entropy": entropy,
            "clusters_per_level": level_sizes(&s),
            "merges": trace.merges,
            "removes": trace.removes,
            "fills": trace.fills,
            "pads": trace.pads,
            "ties": trace.ties,
            "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        }))
    })?;
    for v in &summaries {
        emit(ctx, v, || {
            format!(
                "{}: n={} m={} k={} H={:.6} clusters/level={:?}",
                v["input"].as_str().unwrap_or(""),
                v["nodes"],
                v["edges"],
                v["height"],
                v["entropy"].as_f64().unwrap_or(f64::NAN),
                v["clusters_per_level"]
            )
        });
    }
    Ok(())
}

fn cmd_entropy(ctx: &Ctx, a: EntropyArgs) -> Outcome<()> {
    if a.height == 0 {
        return Err(usage("argument check", "--height must be at least 1"));
    }
    let summaries = for_each_input(ctx, &a.source, |path, graph| {
        let (height, entropy) = if let Some(tree_path) = &a.tree {
            let text = fs::read_to_string(tree_path)
                .map_err(|e| SepError::io(tree_path, e))
                .at("load tree")?;
            let tree = CodingTree::from_json(&graph, &text).at("load tree")?;
            (tree.height(), structural_entropy(&graph, &tree).at("compute entropy")?.total)
        } else if a.height == 1 {
            (1, one_dimensional_entropy(&graph).at("compute entropy")?)
        } else {
            let (tree, _) = build_coding_tree_traced(&graph, a.height).at("build tree")?;
            (a.height, structural_entropy(&graph, &tree).at("compute entropy")?.total)
        };
        Ok(json!({
            "input": path.display().to_string(),
            "height": height,
            "entropy": entropy,
        }))
    })?;
    for v in &summaries {
        emit(ctx, v, || {
            format!(
                "{}: k={} H={:.6}",
                v["input"].as_str().unwrap_or(""),
                v["height"],
                v["entropy"].as_f64().unwrap_or(f64::NAN)
            )
        });
    }
    Ok(())
}

fn cmd_pool(ctx: &Ctx, a: PoolArgs) -> Outcome<()> {
    require_height(a.height)?;
    let Some(input) = &a.source.input else {
        return Err(usage("argument check", "pool needs --input"));
    };
    let graph = load(input, a.source.unweighted)?;
    let features = a
        .features
        .as_ref()
        .map(|p| load_features_csv(p).at("load features"))
        .transpose()?;
    let (tree, _) = build_coding_tree_traced(&graph, a.height).at("build tree")?;
    let s = assignments_from_tree(&tree).at("derive assignments")?;
    let agg: Aggregation = a.agg.into();

    let mut level = PoolingLevel::from_graph(&graph, features.as_ref()).at("pool")?;
    let mut levels = Vec::new();
    let name = stem(input);
    write_assignments(&a.out.join(format!("{name}.json")), a.format, &s)?;
    for si in &s {
        level = pool_with(&level, si, agg).at("pool")?;
        let i = si.level();
        write(&a.out.join(format!("{name}.level{i}.edges")), &pooled_edge_list(&level.adjacency))?;
        if features.is_some() {
            write(&a.out.join(format!("{name}.level{i}.csv")), &features_csv_string(&level.features))?;
        }
        levels.push(json!({
            "level": i,
            "nodes": level.adjacency.size(),
            "volume": level.adjacency.sum(),
        }));
    }
    ctx.note(format!("wrote {} levels to {}", levels.len(), a.out.display()));
    let v = json!({
        "input": input.display().to_string(),
        "height": a.height,
        "aggregation": agg.to_string(),
        "levels": levels,
    });
    emit(ctx, &v, || {
        let sizes: Vec<String> = v["levels"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|l| l["nodes"].to_string())
            .collect();
        format!("{}: pooled sizes {}", input.display(), sizes.join(" -> "))
    });
    Ok(())
}

fn synth_graph(shape: Shape, n: usize, rows: Option<usize>, p: f64, seed: u64) -> Outcome<(Graph, Option<FeatureMatrix>)> {
    match shape {
        Shape::Ring => make_ring(n).map(|(g, x)| (g, Some(x))),
        Shape::Grid => make_grid(n, rows.unwrap_or(n)).map(|(g, x)| (g, Some(x))),
        Shape::Gnp => random_graph(n, p, seed).map(|g| (g, None)),
    }
    .at("generate graph")
}

fn cmd_reconstruct(ctx: &Ctx, a: ReconstructArgs) -> Outcome<()> {
    require_height(a.height)?;
    let (label, graph, features) = match (a.synth, &a.source.input) {
        (Some(layout), _) => {
            let (g, x) = synth_graph(layout.into(), a.n, a.rows, 0.0, a.seed)?;
            (format!("{layout:?}").to_lowercase(), g, x.expect("ring and grid carry coordinates"))
        }
        (None, Some(input)) => {
            let Some(fp) = &a.features else {
                return Err(usage("argument check", "--features is required with --input"));
            };
            let g = load(input, a.source.unweighted)?;
            let x = load_features_csv(fp).at("load features")?;
            x.check_rows_for(&g).at("load features")?;
            (input.display().to_string(), g, x)
        }
        (None, None) => return Err(usage("argument check", "reconstruct needs --input or --synth")),
    };
    let agg: Aggregation = a.agg.into();
    let (tree, _) = build_coding_tree_traced(&graph, a.height).at("build tree")?;
    let s = assignments_from_tree(&tree).at("derive assignments")?;
    let used = &s[..a.height - 1];
    let rebuilt = round_trip_features(&features, used, agg).at("reconstruct")?;
    let mse = features.mse(&rebuilt).at("reconstruct")?;

    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut baseline: Vec<f64> = Vec::with_capacity(a.baseline);
    for _ in 0..a.baseline {
        let random: Vec<ClusterAssignment> = used.iter().map(|si| si.shuffled(&mut rng)).collect();
        let r = round_trip_features(&features, &random, agg).at("baseline")?;
        baseline.push(features.mse(&r).at("baseline")?);
    }
    baseline.sort_by(f64::total_cmp);
    let q = |f: f64| -> Option<f64> {
        if baseline.is_empty() {
            return None;
        }
        let pos = f * (baseline.len() - 1) as f64;
        let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
        Some(baseline[lo] + (baseline[hi] - baseline[lo]) * (pos - lo as f64))
    };
    let median = q(0.5);
    let iqr = q(0.75).zip(q(0.25)).map(|(hi, lo)| hi - lo);

    if let Some(out) = &a.out {
        write(out, &features_csv_string(&rebuilt))?;
    }
    let v = json!({
        "input": label,
        "height": a.height,
        "aggregation": agg.to_string(),
        "clusters_per_level": level_sizes(used),
        "mse": mse,
        "baseline_runs": a.baseline,
        "baseline_median": median,
        "baseline_iqr": iqr,
    });
    emit(ctx, &v, || match (median, iqr) {
        (Some(m), Some(i)) => format!("{label}: mse {mse:.6}, random median {m:.6} (IQR {i:.6})"),
        _ => format!("{label}: mse {mse:.6}"),
    });
    Ok(())
}

fn cmd_synth(ctx: &Ctx, a: SynthArgs) -> Outcome<()> {
    let (graph, features) = synth_graph(a.kind, a.n, a.rows, a.p, a.seed)?;
    let edges = edge_list_string(&graph);
    match &a.out {
        None => print!("{edges}"),
        Some(prefix) => {
            let base = prefix.display().to_string();
            write(Path::new(&format!("{base}.edges")), &edges)?;
            if let Some(x) = &features {
                write(Path::new(&format!("{base}.csv")), &features_csv_string(x))?;
            }
            ctx.note(format!("wrote {base}.edges ({} nodes, {} edges)", graph.node_count(), graph.edge_count()));
        }
    }
    Ok(())
}

fn cmd_bench(ctx: &Ctx, a: BenchArgs) -> Outcome<()> {
    require_height(a.height)?;
    ctx.note(format!("timing {} ladder sizes", a.sizes.len()));
    let report = run_bench(&a.sizes, a.degree, a.seed, a.height, a.repeats).at("benchmark")?;
    let text = match a.format {
        ReportFormat::Csv => {
            let mut t = String::from("n,m,seconds\n");
            for r in &report.rows {
                t.push_str(&format!("{},{},{}\n", r.n, r.m, r.seconds));
            }
            t
        }
        ReportFormat::Json => {
            let mut t = serde_json::to_string(&report).map_err(SepError::from).at("serialize report")?;
            t.push('\n');
            t
        }
    };
    match &a.out {
        Some(p) => write(p, &text)?,
        None if ctx.human => {
            for r in &report.rows {
                println!("n={:>7} m={:>8} {:>10.3} ms", r.n, r.m, r.seconds * 1e3);
            }
            println!("log-log slope {:.3}", report.slope);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_oracle(ctx: &Ctx, a: OracleArgs) -> Outcome<()> {
    if a.height == 0 {
        return Err(usage("argument check", "--height must be at least 1"));
    }
    let summaries = for_each_input(ctx, &a.source, |path, graph| {
        if graph.node_count() > BRUTE_FORCE_MAX_NODES {
            return Err(usage(
                "oracle",
                format!(
                    "{} has {} nodes; the exhaustive search is limited to {BRUTE_FORCE_MAX_NODES}",
                    path.display(),
                    graph.node_count()
                ),
            ));
        }
        let (_, optimal) = brute_force_optimal(&graph, a.height).at("oracle")?;
        let greedy = if a.height == 1 {
            one_dimensional_entropy(&graph).at("compute entropy")?
        } else {
            let (tree, _) = build_coding_tree_traced(&graph, a.height).at("build tree")?;
            structural_entropy(&graph, &tree).at("compute entropy")?.total
        };
        Ok(json!({
            "input": path.display().to_string(),
            "height": a.height,
            "optimal": optimal,
            "greedy": greedy,
            "gap": greedy - optimal,
        }))
    })?;
    for v in &summaries {
        emit(ctx, v, || {
            format!(
                "{}: optimal {:.6} greedy {:.6} gap {:.3e}",
                v["input"].as_str().unwrap_or(""),
                v["optimal"].as_f64().unwrap_or(f64::NAN),
                v["greedy"].as_f64().unwrap_or(f64::NAN),
                v["gap"].as_f64().unwrap_or(f64::NAN)
            )
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_command() {
        for args in [
            &["sepool", "tree", "--input", "g.edges", "--height", "3", "--out", "t.json", "--format", "mm"][..],
            &["sepool", "entropy", "--input", "g.edges", "--height", "1"],
            &["sepool", "pool", "--input", "g.edges", "--height", "2", "--agg", "mean", "--out", "d"],
            &["sepool", "reconstruct", "--synth", "grid", "--n", "8", "--quiet"],
            &["sepool", "synth", "--kind", "gnp", "--n", "50", "--p", "0.1", "--seed", "4"],
            &["sepool", "bench", "--sizes", "100,200", "--human"],
            &["sepool", "oracle", "--input-dir", "dir", "--height", "2"],
        ] {
            Cli::try_parse_from(args).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        }
    }

    #[test]
    fn height_one_is_refused_before_reading_input() {
        let err = require_height(1).unwrap_err();
        assert!(err.error.to_string().contains("k > 1"));
        assert_eq!(run(["sepool", "tree", "--height", "1", "--quiet"]), 1);
    }

    #[test]
    fn bad_usage_exits_two() {
        assert_eq!(run(["sepool", "tree", "--height", "x"]), 2);
        assert_eq!(run(["sepool", "frobnicate"]), 2);
    }
}
