//! Replays a stream through the engine and through snapshot recompute.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::enumerate_matches;
use crate::graph::{DynamicGraph, UpdateOp};
use crate::mapping::Mapping;
use crate::matcher::{Engine, EngineConfig, EngineError, QueryId};
use crate::query::QueryGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every snapshot agreed.
    Success { updates: usize, comparisons: usize },
    /// First disagreement; `timestamp` 0 is the initial snapshot.
    Divergence {
        timestamp: u64,
        query: QueryId,
        missing: Vec<Mapping>,
        extra: Vec<Mapping>,
    },
}

impl Verdict {
    pub fn is_success(&self) -> bool {
        matches!(self, Verdict::Success { .. })
    }
}

fn compare(engine: &Engine, ids: &[QueryId], queries: &[QueryGraph], timestamp: u64) -> Option<Verdict> {
    for (&id, q) in ids.iter().zip(queries) {
        let truth = enumerate_matches(engine.graph(), q);
        let got: BTreeSet<Mapping> = engine.answers(id).expect("registered").iter().cloned().collect();
        if truth != got {
            return Some(Verdict::Divergence {
                timestamp,
                query: id,
                missing: truth.difference(&got).cloned().collect(),
                extra: got.difference(&truth).cloned().collect(),
            });
        }
    }
    None
}

/// Registers `queries` on `g0`, then after the initial match and after every
/// update compares each answer set with brute-force enumeration.
pub fn recompute_stream_check(
    g0: &DynamicGraph,
    stream: &[UpdateOp],
    queries: &[QueryGraph],
    cfg: EngineConfig,
) -> Result<Verdict, EngineError> {
    let mut engine = Engine::new(g0.clone(), cfg)?;
    let ids: Vec<QueryId> = queries.iter().map(|q| engine.register(q.clone())).collect();
    if let Some(v) = compare(&engine, &ids, queries, 0) {
        return Ok(v);
    }
    for op in stream {
        let report = engine.process_update(op)?;
        if let Some(v) = compare(&engine, &ids, queries, report.timestamp) {
            return Ok(v);
        }
    }
    Ok(Verdict::Success {
        updates: stream.len(),
        comparisons: (stream.len() + 1) * queries.len(),
    })
}
