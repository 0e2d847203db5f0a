#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use dsm_core::graph::{DynamicGraph, Label, UpdateOp, VertexId};
use dsm_core::QueryGraph;
use proptest::prelude::*;

#[derive(Clone, Debug)]
pub struct Scenario {
    pub g0: DynamicGraph,
    pub stream: Vec<UpdateOp>,
    pub queries: Vec<QueryGraph>,
}

/// Graph over `0..labels.len()` with the flagged pairs as edges.
pub fn graph_from(labels: &[u32], pairs: &[(u32, u32)]) -> DynamicGraph {
    let mut g = DynamicGraph::new();
    for (v, &l) in labels.iter().enumerate() {
        g.add_vertex(VertexId(v as u32), Label(l)).unwrap();
    }
    for &(a, b) in pairs {
        if a != b && !g.has_edge(VertexId(a), VertexId(b)) {
            g.add_edge(VertexId(a), VertexId(b)).unwrap();
        }
    }
    g
}

/// Toggles each pair: deletes present edges, inserts absent ones.
pub fn toggle_stream(g0: &DynamicGraph, toggles: &[(u32, u32)]) -> Vec<UpdateOp> {
    let mut g = g0.clone();
    let mut out = Vec::new();
    for &(a, b) in toggles {
        if a == b {
            continue;
        }
        let op = if g.has_edge(VertexId(a), VertexId(b)) {
            UpdateOp::delete(a, b)
        } else {
            UpdateOp::insert(a, b)
        };
        g.apply_update(&op).unwrap();
        out.push(op);
    }
    out
}

/// Connected query around `start`: BFS up to `size` vertices, a BFS tree,
/// plus the induced edges selected by `extra`.
pub fn query_around(g: &DynamicGraph, start: VertexId, size: usize, extra: &[bool]) -> Option<QueryGraph> {
    let mut chosen = vec![start];
    let mut tree = Vec::new();
    let mut seen: BTreeSet<VertexId> = [start].into();
    let mut queue: VecDeque<VertexId> = [start].into();
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if chosen.len() < size && seen.insert(y) {
                tree.push((x, y));
                chosen.push(y);
                queue.push_back(y);
            }
        }
    }
    if chosen.len() < 2 {
        return None;
    }
    let idx = |v: VertexId| chosen.iter().position(|&c| c == v).unwrap();
    let mut edges: Vec<(usize, usize)> = tree.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    let mut k = 0;
    for i in 0..chosen.len() {
        for j in i + 1..chosen.len() {
            let tree_edge = edges.contains(&(i, j)) || edges.contains(&(j, i));
            if !tree_edge && g.has_edge(chosen[i], chosen[j]) {
                if extra.get(k).copied().unwrap_or(true) {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
    }
    let labels = chosen.iter().map(|&v| g.label(v).unwrap()).collect();
    Some(QueryGraph::new(labels, &edges).unwrap())
}

pub fn scenario(max_n: u32, n_labels: u32, max_queries: usize) -> impl Strategy<Value = Scenario> {
    (4..=max_n)
        .prop_flat_map(move |n| {
            (
                proptest::collection::vec(0..n_labels, n as usize),
                proptest::collection::vec((0..n, 0..n), 0..(3 * n as usize)),
                proptest::collection::vec((0..n, 0..n), 0..40),
                proptest::collection::vec(
                    (0..n, 2usize..6, proptest::collection::vec(any::<bool>(), 6)),
                    1..=max_queries,
                ),
            )
        })
        .prop_map(|(labels, pairs, toggles, qspecs)| {
            let g0 = graph_from(&labels, &pairs);
            let stream = toggle_stream(&g0, &toggles);
            let mut full = g0.clone();
            for op in &stream {
                full.apply_update(op).unwrap();
            }
            // queries come from either snapshot so some have answers later
            let queries = qspecs
                .iter()
                .enumerate()
                .filter_map(|(i, (s, size, extra))| {
                    let g = if i % 2 == 0 { &g0 } else { &full };
                    query_around(g, VertexId(*s), *size, extra)
                })
                .collect();
            Scenario { g0, stream, queries }
        })
}
