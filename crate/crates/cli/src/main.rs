use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cardest::bench::{
    generate_graph, generate_workload, load_workload, run_workload, summarize, write_csv, write_workload,
    BenchOptions, DegreeDistribution, GraphSpec, WorkloadSpec,
};
use cardest::framework::{estimate_with_disjunctions, parse_configs, EstimatorConfig};
use cardest::graph::{load_graph_dir, save_graph_dir, PropertyGraph, DEFAULT_BUDGET};
use cardest::query::QueryDoc;
use cardest::stats::{BuildConfig, HistogramSpec, MdHistogramSpec, SampleSpec, StatisticsCatalog};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cardest", version, about = "Cardinality estimation for property-graph patterns")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or inspect a statistics catalog.
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Estimate the cardinality of one query.
    Estimate(EstimateArgs),
    /// Run configurations over a workload and write per-query q-errors.
    Bench(BenchArgs),
    /// Write synthetic graphs and workloads.
    #[command(subcommand)]
    Generate(GenerateCmd),
}

#[derive(Subcommand)]
enum StatsCmd {
    Build(StatsBuildArgs),
}

#[derive(Args)]
struct StatsBuildArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated synopses, e.g. `edge,chain2,sstar3,tstar2`.
    #[arg(long, default_value = "")]
    synopses: String,
    #[arg(long)]
    sysr: bool,
    /// Characteristic-set budget for both directions.
    #[arg(long)]
    cs: Option<usize>,
    /// `type:probability`, repeatable; type is id, vertex or ep.
    #[arg(long)]
    sample: Vec<String>,
    /// Bound-sketch bucket count.
    #[arg(long)]
    sketch: Option<u32>,
    /// `key:kind:buckets`, repeatable; kind is width or depth.
    #[arg(long)]
    histogram: Vec<String>,
    /// `key1+key2:buckets`, repeatable.
    #[arg(long)]
    mdh: Vec<String>,
    /// Build everything at small sizes (overrides the individual flags).
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EstimateArgs {
    /// Needed only by techniques that walk the graph.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    stats: PathBuf,
    #[arg(long)]
    query: PathBuf,
    #[arg(long, default_value = "EP")]
    pets: String,
    #[arg(long, default_value = "")]
    epests: String,
    #[arg(long, default_value = "condIndep(MoDi)")]
    ct: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    graph: PathBuf,
    /// JSONL file or a directory of query files.
    #[arg(long)]
    workload: PathBuf,
    /// One configuration per line.
    #[arg(long)]
    configs: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Catalog to use; built with the full preset when absent.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Also score every connected subquery with up to k edges.
    #[arg(long)]
    subqueries: Option<usize>,
    /// Write zero timings so reruns produce identical files.
    #[arg(long)]
    reproducible: bool,
    /// Oracle step budget per query.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Write a JSON summary of the q-error distributions here.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateCmd {
    Graph(GenGraphArgs),
    Workload(GenWorkloadArgs),
}

#[derive(Args)]
struct GenGraphArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    vertices: usize,
    #[arg(long, default_value_t = 200)]
    edges: usize,
    #[arg(long, default_value = "A,B,C")]
    vertex_labels: String,
    #[arg(long, default_value = "r,s")]
    edge_labels: String,
    /// Zipf exponent for out-degrees; uniform when absent.
    #[arg(long)]
    zipf: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    schema: f64,
    #[arg(long, default_value_t = 0.3)]
    prop_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    correlation: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenWorkloadArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    queries: usize,
    #[arg(long, default_value_t = 3)]
    max_edges: usize,
    #[arg(long, default_value_t = 0.7)]
    vertex_label_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    prop_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Stats(StatsCmd::Build(a)) => stats_build(a),
        Cmd::Estimate(a) => estimate(a),
        Cmd::Bench(a) => bench(a),
        Cmd::Generate(GenerateCmd::Graph(a)) => gen_graph(a),
        Cmd::Generate(GenerateCmd::Workload(a)) => gen_workload(a),
    }
}

fn load_graph(dir: &Path) -> Result<PropertyGraph> {
    load_graph_dir(dir).with_context(|| format!("loading graph from {}", dir.display()))
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn build_config(a: &StatsBuildArgs) -> Result<BuildConfig> {
    if a.full {
        return Ok(BuildConfig::full());
    }
    let mut bc = BuildConfig {
        synopses: split_list(&a.synopses).map(str::parse).collect::<Result<_, _>>()?,
        sysr: a.sysr,
        char_sets: a.cs,
        char_sets_in: a.cs,
        sketch: a.sketch.map(|n| (n, a.seed)),
        ..Default::default()
    };
    for s in &a.sample {
        let (pt, pr) = s.split_once(':').with_context(|| format!("--sample {s:?} is not type:probability"))?;
        bc.samples.push(SampleSpec { pattern_type: pt.parse()?, probability: pr.parse()?, seed: a.seed });
    }
    for h in &a.histogram {
        let parts: Vec<&str> = h.split(':').collect();
        let [key, kind, n] = parts[..] else { bail!("--histogram {h:?} is not key:kind:buckets") };
        bc.histograms.push(HistogramSpec { key: key.into(), kind: kind.parse()?, n_buckets: n.parse()? });
    }
    for h in &a.mdh {
        let (keys, n) = h.split_once(':').with_context(|| format!("--mdh {h:?} is not keys:buckets"))?;
        bc.md_histograms.push(MdHistogramSpec {
            keys: keys.split('+').map(String::from).collect(),
            buckets_per_axis: n.parse()?,
        });
    }
    Ok(bc)
}

fn stats_build(a: StatsBuildArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let cat = StatisticsCatalog::build(&g, &build_config(&a)?)?;
    cat.save(&a.out)?;
    eprintln!("wrote {} ({} ids)", a.out.display(), g.n_ids());
    Ok(())
}

fn load_stats(path: &Path, g: Option<&PropertyGraph>) -> Result<StatisticsCatalog> {
    let cat = StatisticsCatalog::load(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(g) = g {
        if !cat.matches(g) {
            bail!("{} was built for a different graph", path.display());
        }
    }
    Ok(cat)
}

fn estimate(a: EstimateArgs) -> Result<()> {
    let g = a.graph.as_deref().map(load_graph).transpose()?;
    let cat = load_stats(&a.stats, g.as_ref())?;
    let doc = QueryDoc::read(&a.query)?;
    let cfg = EstimatorConfig::new(&a.pets, &a.epests, &a.ct)?.with_seed(a.seed);
    let report = estimate_with_disjunctions(&doc, g.as_ref(), &cat, &cfg)?;
    if a.json {
        println!("{}", report.to_json()?);
    } else {
        print!("{report}");
    }
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let cat = match &a.stats {
        Some(p) => load_stats(p, Some(&g))?,
        None => StatisticsCatalog::build(&g, &BuildConfig::full())?,
    };
    let text = fs::read_to_string(&a.configs).with_context(|| format!("reading {}", a.configs.display()))?;
    let configs = parse_configs(&text)?;
    if configs.is_empty() {
        bail!("{} holds no configurations", a.configs.display());
    }
    let queries = load_workload(&a.workload)?;
    let opts = BenchOptions { oracle_budget: a.budget, subqueries: a.subqueries, reproducible: a.reproducible };
    let report = run_workload(&g, &cat, &queries, &configs, &opts)?;
    write_csv(BufWriter::new(File::create(&a.out)?), &report.rows)?;
    for s in &report.skipped {
        eprintln!("skipped {}: {}", s.query_id, s.reason);
    }
    let summary = summarize(&report.rows);
    let mut err = io::stderr().lock();
    writeln!(err, "{:<40} {:>6} {:>10} {:>10} {:>10}", "config", "n", "median", "p90", "max")?;
    for s in &summary {
        let q = &s.qerror;
        writeln!(err, "{:<40} {:>6} {:>10.3} {:>10.3} {:>10.3}", s.config, q.count, q.median, q.p90, q.max)?;
    }
    if let Some(p) = &a.summary {
        fs::write(p, serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(())
}

fn gen_graph(a: GenGraphArgs) -> Result<()> {
    let spec = GraphSpec {
        n_vertices: a.vertices,
        n_edges: a.edges,
        vertex_labels: split_list(&a.vertex_labels).map(String::from).collect(),
        edge_labels: split_list(&a.edge_labels).map(String::from).collect(),
        degree: match a.zipf {
            Some(exponent) => DegreeDistribution::Zipf { exponent },
            None => DegreeDistribution::Uniform,
        },
        schema: a.schema,
        prop_rate: a.prop_rate,
        correlation: a.correlation,
        seed: a.seed,
    };
    let g = generate_graph(&spec)?;
    save_graph_dir(&g, &a.out)?;
    eprintln!("wrote {} vertices and {} edges to {}", g.n_vertices(), g.n_edges(), a.out.display());
    Ok(())
}

fn gen_workload(a: GenWorkloadArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let spec = WorkloadSpec {
        n_queries: a.queries,
        max_edges: a.max_edges,
        vertex_label_rate: a.vertex_label_rate,
        prop_rate: a.prop_rate,
        seed: a.seed,
    };
    write_workload(&a.out, &generate_workload(&g, &spec)?)?;
    Ok(())
}
