//! The matching engine.
//!
//! Registered queries get their answers once through candidate retrieval,
//! a greedy plan and a left-deep join. After that every edge insertion is
//! matched against each query edge (both orientations), seeding a join that
//! only produces mappings using the new edge; every deletion drops the
//! answers whose edge images contain the removed edge.

pub mod answers;
pub mod plan;
pub mod refine;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::clock::{Clock, NoClock, StageTimes};
use crate::das3::{self, compute_degree_groups, Das3Error, GridSpec, Probe, ScanStats, Synopses};
use crate::embedding::{dominated, Embedder, EmbeddingConfig, EmbeddingError, EmbeddingVector};
use crate::graph::{DynamicGraph, GraphError, UpdateKind, UpdateOp, VertexId};
use crate::mapping::Mapping;
use crate::query::QueryGraph;

pub use answers::AnswerSet;
pub use plan::{is_valid_plan, make_plan, make_plan_from};
pub use refine::{refine, Steps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryId(pub u32);

impl fmt::Display for QueryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeletionMode {
    /// Look removed answers up in the edge index.
    #[default]
    Index,
    /// Test every stored answer.
    Scan,
}

/// Deliberate defects for exercising the verifier.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Faults {
    /// Drop the MBR filter everywhere.
    pub skip_mbr: bool,
    /// Try only one orientation of each query edge on insertion.
    pub single_orientation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    pub embedding: EmbeddingConfig,
    /// Number of degree groups `m`.
    pub groups: usize,
    /// Grid intervals per dimension `K`.
    pub cells_per_dim: usize,
    pub deletion: DeletionMode,
    #[doc(hidden)]
    pub faults: Faults,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            embedding: EmbeddingConfig::default(),
            groups: 3,
            cells_per_dim: 5,
            deletion: DeletionMode::Index,
            faults: Faults::default(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        self.embedding.validate().map_err(EngineError::Embedding)?;
        if self.groups == 0 {
            return Err(EngineError::InvalidConfig("need at least one degree group"));
        }
        if self.cells_per_dim == 0 || self.cells_per_dim > usize::from(u16::MAX) {
            return Err(EngineError::InvalidConfig("cells per dimension must be in 1..=65535"));
        }
        let bits = (usize::BITS - (self.cells_per_dim - 1).leading_zeros()) as usize * 2 * self.embedding.dim;
        if bits > 64 {
            return Err(EngineError::InvalidConfig("grid too fine for 64-bit cell ids"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Embedding(EmbeddingError),
    #[error(transparent)]
    Synopsis(#[from] Das3Error),
    #[error("unknown query {0}")]
    UnknownQuery(QueryId),
    #[error("invalid engine config: {0}")]
    InvalidConfig(&'static str),
}

/// A query with its embeddings, initial candidates, plan and answers.
#[derive(Clone, Debug)]
pub struct RegisteredQuery {
    pub graph: QueryGraph,
    pub embeddings: Vec<EmbeddingVector>,
    /// Candidate sets from registration time, sorted.
    pub candidates: Vec<Vec<VertexId>>,
    pub scan_stats: Vec<ScanStats>,
    pub plan: Vec<usize>,
    pub answers: AnswerSet,
}

impl RegisteredQuery {
    fn probe(&self, u: usize) -> Probe<'_> {
        Probe {
            embedding: self.embeddings[u].as_slice(),
            degree: self.graph.degree(u),
            label: self.graph.label(u),
        }
    }

    /// Mean pruning power over the query vertices at registration time.
    pub fn pruning_power(&self) -> f64 {
        let n = self.scan_stats.len() as f64;
        self.scan_stats.iter().map(ScanStats::pruning_power).sum::<f64>() / n
    }
}

/// Answer changes of one update, per query, in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateReport {
    pub timestamp: u64,
    pub added: Vec<(QueryId, Vec<Mapping>)>,
    pub removed: Vec<(QueryId, Vec<Mapping>)>,
}

impl UpdateReport {
    pub fn is_empty(&self) -> bool {
        self.added.iter().all(|(_, v)| v.is_empty()) && self.removed.iter().all(|(_, v)| v.is_empty())
    }
}

/// Query vertex embeddings: each is the embedding of a data vertex with the
/// same label and neighbour labels.
pub fn embed_query(q: &QueryGraph, embedder: &Embedder) -> Vec<EmbeddingVector> {
    (0..q.len())
        .map(|u| embedder.embed_star(q.label(u), q.neighbors(u).iter().map(|&w| q.label(w))))
        .collect()
}

pub struct Engine {
    cfg: EngineConfig,
    embedder: Embedder,
    graph: DynamicGraph,
    synopses: Synopses,
    queries: BTreeMap<QueryId, RegisteredQuery>,
    next_query: u32,
}

impl Engine {
    /// Builds embeddings and synopses over the initial graph.
    pub fn new(graph: DynamicGraph, cfg: EngineConfig) -> Result<Self, EngineError> {
        cfg.validate()?;
        let embedder = Embedder::new(cfg.embedding).map_err(EngineError::Embedding)?;
        let groups = compute_degree_groups(graph.vertex_ids().map(|v| graph.degree(v)), cfg.groups);
        let spec = GridSpec::for_config(&cfg.embedding, cfg.cells_per_dim, das3::span_max(&graph, &embedder));
        let mut synopses = Synopses::build(&graph, groups, spec, &embedder);
        synopses.set_mbr_filter(!cfg.faults.skip_mbr);
        Ok(Self {
            cfg,
            embedder,
            graph,
            synopses,
            queries: BTreeMap::new(),
            next_query: 0,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn embedder(&self) -> &Embedder {
        &self.embedder
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn synopses(&self) -> &Synopses {
        &self.synopses
    }

    pub fn query_ids(&self) -> impl Iterator<Item = QueryId> + '_ {
        self.queries.keys().copied()
    }

    pub fn query(&self, id: QueryId) -> Option<&RegisteredQuery> {
        self.queries.get(&id)
    }

    pub fn answers(&self, id: QueryId) -> Option<&AnswerSet> {
        self.queries.get(&id).map(|r| &r.answers)
    }

    /// Registers a query and computes its initial answers.
    pub fn register(&mut self, q: QueryGraph) -> QueryId {
        let id = QueryId(self.next_query);
        self.next_query += 1;
        let rq = self.initial_match(q);
        self.queries.insert(id, rq);
        id
    }

    /// Candidate retrieval, planning and refinement against the current
    /// snapshot.
    pub fn initial_match(&self, q: QueryGraph) -> RegisteredQuery {
        let embeddings = embed_query(&q, &self.embedder);
        let mut candidates = Vec::with_capacity(q.len());
        let mut scan_stats = Vec::with_capacity(q.len());
        for (u, emb) in embeddings.iter().enumerate() {
            let probe = Probe {
                embedding: emb.as_slice(),
                degree: q.degree(u),
                label: q.label(u),
            };
            let (c, s) = self.synopses.scan_candidates(probe, &self.embedder);
            candidates.push(c);
            scan_stats.push(s);
        }
        let sizes: Vec<usize> = candidates.iter().map(Vec::len).collect();
        let plan = make_plan(&q, &sizes);
        let mut answers = AnswerSet::new();
        for m in refine(&q, &plan, &self.graph, &[], &candidates) {
            answers.insert(m, &q);
        }
        RegisteredQuery {
            graph: q,
            embeddings,
            candidates,
            scan_stats,
            plan,
            answers,
        }
    }

    /// Fresh scan of every query vertex against the current synopses.
    pub fn scan_query(&self, id: QueryId) -> Result<Vec<(Vec<VertexId>, ScanStats)>, EngineError> {
        let rq = self.queries.get(&id).ok_or(EngineError::UnknownQuery(id))?;
        Ok((0..rq.graph.len())
            .map(|u| self.synopses.scan_candidates(rq.probe(u), &self.embedder))
            .collect())
    }

    pub fn process_update(&mut self, op: &UpdateOp) -> Result<UpdateReport, EngineError> {
        self.process_update_timed(op, &NoClock).map(|(r, _)| r)
    }

    /// Applies `op`, maintains the synopses and updates every query's
    /// answers, timing each stage with `clock`.
    pub fn process_update_timed(
        &mut self,
        op: &UpdateOp,
        clock: &dyn Clock,
    ) -> Result<(UpdateReport, StageTimes), EngineError> {
        let mut times = StageTimes::default();
        let t0 = clock.now_nanos();
        let effect = self.graph.apply_update(op)?;
        let t1 = clock.now_nanos();
        self.synopses.update_embeddings(&effect, &self.embedder)?;
        let t2 = clock.now_nanos();
        self.synopses.update_synopses(&effect, &self.embedder)?;
        let t3 = clock.now_nanos();
        times.graph = t1 - t0;
        times.embedding = t2 - t1;
        times.synopsis = t3 - t2;

        let mut report = UpdateReport {
            timestamp: effect.timestamp,
            ..UpdateReport::default()
        };
        let (a, b) = (op.u, op.v);
        let ids: Vec<QueryId> = self.queries.keys().copied().collect();
        for id in ids {
            match effect.kind {
                UpdateKind::Insert => {
                    let added = self.on_insert(id, a, b, clock, &mut times);
                    report.added.push((id, added));
                }
                UpdateKind::Delete => {
                    let t = clock.now_nanos();
                    let removed = self.on_delete(id, a, b);
                    times.refinement += clock.now_nanos() - t;
                    report.removed.push((id, removed));
                }
            }
        }
        Ok((report, times))
    }

    /// Whether data vertex `v` can host query vertex `u`: label, dominance
    /// by `v`'s full star embedding, then the MBR at `deg(u)`.
    fn endpoint_ok(&self, rq: &RegisteredQuery, u: usize, v: VertexId) -> bool {
        let Some(star) = self.synopses.star(v) else {
            return false;
        };
        if star.label != rq.graph.label(u) {
            return false;
        }
        let q = rq.embeddings[u].as_slice();
        if !dominated(q, &star.embedding(&self.embedder)) {
            return false;
        }
        let deg = rq.graph.degree(u);
        if self.cfg.faults.skip_mbr {
            deg <= star.degree()
        } else {
            star.mbr_contains(&self.embedder, q, deg)
        }
    }

    fn on_insert(
        &mut self,
        id: QueryId,
        a: VertexId,
        b: VertexId,
        clock: &dyn Clock,
        times: &mut StageTimes,
    ) -> Vec<Mapping> {
        let rq = &self.queries[&id];
        let q = &rq.graph;
        let sizes: Vec<usize> = rq.candidates.iter().map(Vec::len).collect();
        let mut found = Vec::new();
        for &(qa, qb) in q.edges() {
            let orientations: &[(VertexId, VertexId)] = if self.cfg.faults.single_orientation {
                &[(a, b)]
            } else {
                &[(a, b), (b, a)]
            };
            for &(va, vb) in orientations {
                let t = clock.now_nanos();
                let ok = self.endpoint_ok(rq, qa, va) && self.endpoint_ok(rq, qb, vb);
                times.filtering += clock.now_nanos() - t;
                if !ok {
                    continue;
                }
                let t = clock.now_nanos();
                let steps = Steps::new(q, make_plan_from(q, &[qa, qb], &sizes));
                let mut assigned = alloc::vec![va, vb];
                let synopses = &self.synopses;
                let embedder = &self.embedder;
                let mut admit = |u: usize, c: VertexId| synopses.admits(rq.probe(u), c, embedder);
                refine::extend(q, &steps, &self.graph, &[], &mut assigned, &mut admit, &mut found);
                times.refinement += clock.now_nanos() - t;
            }
        }
        let rq = self.queries.get_mut(&id).expect("registered");
        let mut added: Vec<Mapping> = found
            .into_iter()
            .filter(|m| rq.answers.insert(m.clone(), &rq.graph))
            .collect();
        added.sort_unstable();
        added
    }

    fn on_delete(&mut self, id: QueryId, a: VertexId, b: VertexId) -> Vec<Mapping> {
        let rq = self.queries.get_mut(&id).expect("registered");
        match self.cfg.deletion {
            DeletionMode::Index => rq.answers.remove_edge(a, b, &rq.graph),
            DeletionMode::Scan => rq.answers.remove_edge_scan(a, b, &rq.graph),
        }
    }
}
