use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dsm_cli::bench::{
    compare_embedding_modes, run_engine, run_naive, write_compare_csv, write_metrics_csv, write_mode_csv,
};
use dsm_cli::config::{DataArgs, EngineArgs};
use dsm_cli::formats::{self, load_graph, load_queries, load_stream, write_answers, write_file};
use dsm_core::oracle::enumerate_matches;
use dsm_core::oracle::stream::{recompute_stream_check, Verdict};
use dsm_core::{EmbeddingMode, Engine, QueryGraph, UpdateOp};

#[derive(Parser)]
#[command(name = "dsm", version, about = "Continuous subgraph matching over dynamic graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic graph, its G_0/stream split and sampled queries.
    Gen(GenArgs),
    /// Register queries on G_0, replay a stream and report answers.
    Run(RunArgs),
    /// Brute-force answers on the graph after the whole stream.
    Oracle(OracleArgs),
    /// Check the engine against brute force after every update.
    Verify(VerifyArgs),
    /// Time the engine against per-update recomputation.
    Bench(BenchArgs),
    /// Vary one parameter and record engine timings per embedding mode.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Inputs {
    /// Initial graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Update stream file.
    #[arg(long)]
    stream: Option<PathBuf>,
    /// Query files or directories of query files.
    #[arg(long = "query", required = true, num_args = 1..)]
    queries: Vec<PathBuf>,
}

struct Loaded {
    g0: dsm_core::DynamicGraph,
    stream: Vec<UpdateOp>,
    paths: Vec<PathBuf>,
    queries: Vec<QueryGraph>,
}

impl Inputs {
    fn load(&self) -> Result<Loaded> {
        let g0 = load_graph(&self.graph)?;
        let stream = match &self.stream {
            Some(p) => load_stream(p)?,
            None => Vec::new(),
        };
        let (paths, queries) = load_queries(&self.queries)?.into_iter().unzip();
        Ok(Loaded {
            g0,
            stream,
            paths,
            queries,
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Final answers per query.
    #[arg(long)]
    answers: Option<PathBuf>,
    /// Answer changes per update.
    #[arg(long)]
    deltas: Option<PathBuf>,
    /// Per-query metrics CSV.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Final grid synopses, one line per non-empty cell.
    #[arg(long)]
    dump_synopsis: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    inputs: Inputs,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Engine,
    Naive,
    Both,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    /// Engine-vs-naive CSV (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-query engine metrics CSV.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Embedding-mode comparison CSV on the final graph.
    #[arg(long)]
    modes_out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    Dim,
    Ratio,
    Groups,
    Cells,
    Labels,
    QuerySize,
    QueryDegree,
    AvgDegree,
    Vertices,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, value_enum)]
    param: SweepParam,
    #[arg(long, required = true, value_delimiter = ',')]
    values: Vec<f64>,
    /// Embedding modes to run at every point.
    #[arg(long, value_delimiter = ',', default_value = "plain,base,cost")]
    modes: Vec<EmbeddingMode>,
    /// Output CSV (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn answers_text<'a>(
    blocks: impl IntoIterator<Item = (usize, &'a Path, &'a QueryGraph, Vec<&'a dsm_core::Mapping>)>,
) -> String {
    let mut out = String::new();
    for (i, path, q, ms) in blocks {
        writeln!(out, "# q{i} {} answers={}", path.display(), ms.len()).unwrap();
        out.push_str(&write_answers(q, ms, ""));
    }
    out
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let ds = a.data.dataset()?;
    write_file(&a.out.join("graph.txt"), &formats::write_graph(&ds.graph))?;
    write_file(&a.out.join("g0.txt"), &formats::write_graph(&ds.g0))?;
    write_file(&a.out.join("stream.txt"), &formats::write_stream(&ds.stream))?;
    for (i, q) in ds.queries.iter().enumerate() {
        write_file(
            &a.out.join("queries").join(format!("q{i:04}.txt")),
            &formats::write_query(q),
        )?;
    }
    eprintln!(
        "wrote {} vertices, {} edges in G_0, {} updates, {} queries to {}",
        ds.g0.vertex_count(),
        ds.g0.edge_count(),
        ds.stream.len(),
        ds.queries.len(),
        a.out.display()
    );
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let l = a.inputs.load()?;
    let mut deltas = a.deltas.as_deref().map(|p| sink(Some(p))).transpose()?;
    let (engine, metrics) = run_engine(
        &l.g0,
        &l.stream,
        &l.queries,
        a.engine.engine_config(),
        deltas.as_mut().map(|w| w.as_mut() as &mut dyn Write),
    )?;
    if let Some(mut w) = deltas {
        w.flush()?;
    }
    let ids: Vec<_> = engine.query_ids().collect();
    let text = answers_text(ids.iter().enumerate().map(|(i, &id)| {
        let ms = engine.answers(id).expect("registered").iter().collect();
        (i, l.paths[i].as_path(), &l.queries[i], ms)
    }));
    match &a.answers {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    if let Some(p) = &a.metrics {
        write_metrics_csv(sink(Some(p))?, &metrics)?;
    }
    if let Some(p) = &a.dump_synopsis {
        write_file(p, &dump_synopsis(&engine))?;
    }
    eprintln!(
        "{} updates, {} answers added, {} removed, {:.3} ms",
        metrics.updates,
        metrics.added,
        metrics.removed,
        metrics.stream_ns() as f64 / 1e6
    );
    Ok(())
}

fn dump_synopsis(engine: &Engine) -> String {
    let syn = engine.synopses();
    let mut out = String::new();
    writeln!(out, "degree bounds {:?}", syn.groups().bounds()).unwrap();
    for (j, grid) in syn.grids().iter().enumerate() {
        writeln!(out, "group {j} vertices={}", grid.len()).unwrap();
        write!(out, "{grid}").unwrap();
    }
    out
}

fn cmd_oracle(a: OracleArgs) -> Result<()> {
    let l = a.inputs.load()?;
    let mut g = l.g0;
    for op in &l.stream {
        g.apply_update(op)
            .with_context(|| format!("update at t={}", op.timestamp))?;
    }
    let sets: Vec<_> = l.queries.iter().map(|q| enumerate_matches(&g, q)).collect();
    let text = answers_text(
        sets.iter()
            .enumerate()
            .map(|(i, s)| (i, l.paths[i].as_path(), &l.queries[i], s.iter().collect())),
    );
    match &a.out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let l = a.inputs.load()?;
    match recompute_stream_check(&l.g0, &l.stream, &l.queries, a.engine.engine_config())? {
        Verdict::Success { updates, comparisons } => {
            println!("ok: {updates} updates, {comparisons} snapshot comparisons");
            Ok(ExitCode::SUCCESS)
        }
        Verdict::Divergence {
            timestamp,
            query,
            missing,
            extra,
        } => {
            let q = &l.queries[query.0 as usize];
            println!(
                "divergence at t={timestamp} on q{query} ({})",
                l.paths[query.0 as usize].display()
            );
            print!("{}", write_answers(q, &missing, "missing "));
            print!("{}", write_answers(q, &extra, "extra "));
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let ds = a.data.dataset()?;
    let cfg = a.engine.engine_config();
    let engine = if a.method != Method::Naive {
        let (_, m) = run_engine(&ds.g0, &ds.stream, &ds.queries, cfg, None)?;
        if let Some(p) = &a.metrics {
            write_metrics_csv(sink(Some(p))?, &m)?;
        }
        Some(m)
    } else {
        None
    };
    let naive = (a.method != Method::Engine).then(|| run_naive(&ds.g0, &ds.stream, &ds.queries));
    write_compare_csv(sink(a.out.as_deref())?, engine.as_ref(), naive.as_ref())?;
    if let Some(p) = &a.modes_out {
        let name = format!("nws-{}", ds.graph.vertex_count());
        let rows = compare_embedding_modes(&ds.graph, &name, &ds.queries, cfg, &EmbeddingMode::ALL)?;
        write_mode_csv(sink(Some(p))?, &rows)?;
    }
    Ok(())
}

const SWEEP_HEADER: [&str; 10] = [
    "param",
    "value",
    "mode",
    "updates",
    "setup_us",
    "total_us",
    "per_update_us",
    "mean_pruning_power",
    "candidates",
    "final_answers",
];

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let mut out = csv::Writer::from_writer(sink(a.out.as_deref())?);
    out.write_record(SWEEP_HEADER)?;
    let name = a.param.to_possible_value().expect("named").get_name().to_owned();
    for &value in &a.values {
        let (mut data, mut eng) = (a.data.clone(), a.engine.clone());
        match a.param {
            SweepParam::Dim => eng.dim = value as usize,
            SweepParam::Ratio => eng.ratio = value,
            SweepParam::Groups => eng.groups = value as usize,
            SweepParam::Cells => eng.cells = value as usize,
            SweepParam::Labels => data.labels = value as u32,
            SweepParam::QuerySize => data.query_size = value as usize,
            SweepParam::QueryDegree => data.query_avg_degree = value,
            SweepParam::AvgDegree => data.avg_degree = value,
            SweepParam::Vertices => data.vertices = value as usize,
        }
        let ds = data.dataset()?;
        for &mode in &a.modes {
            eng.mode = mode;
            let (_, m) = run_engine(&ds.g0, &ds.stream, &ds.queries, eng.engine_config(), None)?;
            let nq = m.queries.len().max(1) as f64;
            let pp = m.queries.iter().map(|q| q.pruning_power).sum::<f64>() / nq;
            out.write_record([
                name.clone(),
                value.to_string(),
                mode.name().to_owned(),
                m.updates.to_string(),
                format!("{:.3}", m.setup_ns as f64 / 1e3),
                format!("{:.3}", m.stream_ns() as f64 / 1e3),
                format!("{:.3}", m.stream_ns() as f64 / 1e3 / m.updates.max(1) as f64),
                format!("{pp:.6}"),
                m.queries.iter().map(|q| q.candidates).sum::<usize>().to_string(),
                m.queries.iter().map(|q| q.final_answers).sum::<usize>().to_string(),
            ])?;
            out.flush()?;
        }
    }
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Gen(a) => cmd_gen(a)?,
        Cmd::Run(a) => cmd_run(a)?,
        Cmd::Oracle(a) => cmd_oracle(a)?,
        Cmd::Verify(a) => return cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a)?,
        Cmd::Sweep(a) => cmd_sweep(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> Result<ExitCode> {
    match dispatch(Cli::parse().cmd) {
        // stdout closed early, e.g. piped into `head`
        Err(e)
            if e.chain().any(|c| {
                c.downcast_ref::<std::io::Error>()
                    .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            }) =>
        {
            Ok(ExitCode::SUCCESS)
        }
        other => other,
    }
}
