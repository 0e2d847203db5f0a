//! Timed engine runs, the naive recompute baseline and mode comparisons.

use std::io::Write;
use std::time::Instant;

use dsm_core::cost_model::{self, Divisor};
use dsm_core::das3::ScanStats;
use dsm_core::graph::UpdateOp;
use dsm_core::matcher::EngineError;
use dsm_core::oracle::enumerate_matches;
use dsm_core::{Clock, DynamicGraph, EmbeddingMode, Engine, EngineConfig, QueryGraph, StageTimes};

/// Monotonic clock measured from construction.
#[derive(Clone, Copy, Debug)]
pub struct StdClock {
    origin: Instant,
}

impl Default for StdClock {
    fn default() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Clock for StdClock {
    fn now_nanos(&self) -> u64 {
        self.origin.elapsed().as_nanos() as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryMetrics {
    pub query: usize,
    pub vertices: usize,
    pub edges: usize,
    pub initial_answers: usize,
    pub final_answers: usize,
    pub pruning_power: f64,
    pub candidates: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunMetrics {
    pub updates: usize,
    /// Engine construction plus query registration.
    pub setup_ns: u64,
    pub stages: StageTimes,
    pub added: usize,
    pub removed: usize,
    pub queries: Vec<QueryMetrics>,
}

impl RunMetrics {
    /// Time spent processing the stream.
    pub fn stream_ns(&self) -> u64 {
        self.stages.total()
    }
}

/// Builds the engine, registers the queries and replays the stream.
/// `deltas` receives one line per answer change.
pub fn run_engine(
    g0: &DynamicGraph,
    stream: &[UpdateOp],
    queries: &[QueryGraph],
    cfg: EngineConfig,
    mut deltas: Option<&mut dyn Write>,
) -> Result<(Engine, RunMetrics), EngineError> {
    let clock = StdClock::default();
    let t0 = clock.now_nanos();
    let mut engine = Engine::new(g0.clone(), cfg)?;
    let ids: Vec<_> = queries.iter().map(|q| engine.register(q.clone())).collect();
    let initial: Vec<usize> = ids
        .iter()
        .map(|&id| engine.answers(id).map_or(0, |a| a.len()))
        .collect();
    let mut metrics = RunMetrics {
        setup_ns: clock.now_nanos() - t0,
        updates: stream.len(),
        ..RunMetrics::default()
    };
    let pairs: Vec<_> = ids.iter().copied().zip(queries.iter()).collect();
    for op in stream {
        let (report, times) = engine.process_update_timed(op, &clock)?;
        metrics.stages += times;
        metrics.added += report.added.iter().map(|(_, v)| v.len()).sum::<usize>();
        metrics.removed += report.removed.iter().map(|(_, v)| v.len()).sum::<usize>();
        if let Some(w) = deltas.as_mut() {
            w.write_all(crate::formats::write_report(&report, &pairs).as_bytes())
                .expect("delta sink is writable");
        }
    }
    for (i, (&id, q)) in ids.iter().zip(queries).enumerate() {
        let rq = engine.query(id).expect("registered");
        metrics.queries.push(QueryMetrics {
            query: i,
            vertices: q.len(),
            edges: q.edges().len(),
            initial_answers: initial[i],
            final_answers: rq.answers.len(),
            pruning_power: rq.pruning_power(),
            candidates: rq.candidates.iter().map(Vec::len).sum(),
        });
    }
    Ok((engine, metrics))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NaiveMetrics {
    pub updates: usize,
    pub total_ns: u64,
    pub final_answers: Vec<usize>,
}

/// Applies each update and recomputes every query from scratch with the
/// brute-force enumerator.
pub fn run_naive(g0: &DynamicGraph, stream: &[UpdateOp], queries: &[QueryGraph]) -> NaiveMetrics {
    let start = Instant::now();
    let mut g = g0.clone();
    let mut last = queries.iter().map(|q| enumerate_matches(&g, q).len()).collect();
    for op in stream {
        g.apply_update(op).expect("stream applies cleanly");
        last = queries.iter().map(|q| enumerate_matches(&g, q).len()).collect();
    }
    NaiveMetrics {
        updates: stream.len(),
        total_ns: start.elapsed().as_nanos() as u64,
        final_answers: last,
    }
}

/// One row of the embedding-mode comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeRow {
    pub mode: EmbeddingMode,
    pub graph: String,
    pub query_id: usize,
    pub pruning_power: f64,
    pub estimated_cost: f64,
    pub measured_candidates: usize,
    pub wall_clock_us: f64,
}

pub const MODE_CSV_HEADER: [&str; 7] = [
    "mode",
    "graph",
    "query_id",
    "pruning_power",
    "estimated_cost",
    "measured_candidates",
    "wall_clock_us",
];

/// Per mode and query: mean pruning power over query vertices, summed
/// cost estimates, summed candidate counts and the time to compute the
/// initial answers.
pub fn compare_embedding_modes(
    g: &DynamicGraph,
    graph_name: &str,
    queries: &[QueryGraph],
    base: EngineConfig,
    modes: &[EmbeddingMode],
) -> Result<Vec<ModeRow>, EngineError> {
    let mut rows = Vec::new();
    for &mode in modes {
        let mut cfg = base;
        cfg.embedding.mode = mode;
        let engine = Engine::new(g.clone(), cfg)?;
        let stats = cost_model::graph_stats(g, engine.embedder()).ok();
        for (i, q) in queries.iter().enumerate() {
            let t = Instant::now();
            let rq = engine.initial_match(q.clone());
            let wall = t.elapsed().as_secs_f64() * 1e6;
            let estimated_cost = stats.as_ref().map_or(f64::NAN, |s| {
                rq.embeddings
                    .iter()
                    .map(|e| {
                        cost_model::estimate_cost_point_mass(e.as_slice(), s, g.vertex_count(), Divisor::Variance)
                            .map_or(f64::NAN, |c| c.estimate)
                    })
                    .sum()
            });
            rows.push(ModeRow {
                mode,
                graph: graph_name.to_owned(),
                query_id: i,
                pruning_power: rq.pruning_power(),
                estimated_cost,
                measured_candidates: rq.scan_stats.iter().map(|s: &ScanStats| s.survivors).sum(),
                wall_clock_us: wall,
            });
        }
    }
    Ok(rows)
}

pub fn write_mode_csv<W: Write>(w: W, rows: &[ModeRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(MODE_CSV_HEADER)?;
    for r in rows {
        out.write_record([
            r.mode.name().to_owned(),
            r.graph.clone(),
            r.query_id.to_string(),
            format!("{:.6}", r.pruning_power),
            format!("{:.6}", r.estimated_cost),
            r.measured_candidates.to_string(),
            format!("{:.3}", r.wall_clock_us),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub const METRICS_CSV_HEADER: [&str; 16] = [
    "query_id",
    "vertices",
    "edges",
    "initial_answers",
    "final_answers",
    "pruning_power",
    "candidates",
    "updates",
    "setup_us",
    "total_us",
    "graph_us",
    "embedding_us",
    "synopsis_us",
    "filtering_us",
    "refinement_us",
    "answer_changes",
];

/// One row per query; the timing columns repeat the run totals.
pub fn write_metrics_csv<W: Write>(w: W, m: &RunMetrics) -> csv::Result<()> {
    let us = |ns: u64| format!("{:.3}", ns as f64 / 1e3);
    let mut out = csv::Writer::from_writer(w);
    out.write_record(METRICS_CSV_HEADER)?;
    for q in &m.queries {
        out.write_record([
            q.query.to_string(),
            q.vertices.to_string(),
            q.edges.to_string(),
            q.initial_answers.to_string(),
            q.final_answers.to_string(),
            format!("{:.6}", q.pruning_power),
            q.candidates.to_string(),
            m.updates.to_string(),
            us(m.setup_ns),
            us(m.stream_ns()),
            us(m.stages.graph),
            us(m.stages.embedding),
            us(m.stages.synopsis),
            us(m.stages.filtering),
            us(m.stages.refinement),
            (m.added + m.removed).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub const COMPARE_CSV_HEADER: [&str; 5] = ["method", "updates", "total_us", "per_update_us", "final_answers"];

/// Engine-vs-naive rows.
pub fn write_compare_csv<W: Write>(w: W, engine: Option<&RunMetrics>, naive: Option<&NaiveMetrics>) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(COMPARE_CSV_HEADER)?;
    let per = |ns: u64, n: usize| format!("{:.3}", ns as f64 / 1e3 / n.max(1) as f64);
    if let Some(m) = engine {
        let answers: usize = m.queries.iter().map(|q| q.final_answers).sum();
        out.write_record([
            "engine".to_owned(),
            m.updates.to_string(),
            format!("{:.3}", m.stream_ns() as f64 / 1e3),
            per(m.stream_ns(), m.updates),
            answers.to_string(),
        ])?;
    }
    if let Some(n) = naive {
        out.write_record([
            "naive".to_owned(),
            n.updates.to_string(),
            format!("{:.3}", n.total_ns as f64 / 1e3),
            per(n.total_ns, n.updates),
            n.final_answers.iter().sum::<usize>().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
