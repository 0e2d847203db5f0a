//! Synthetic small-world graphs, update streams and sampled queries.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Zipf};

use dsm_core::graph::{Label, UpdateOp, VertexId};
use dsm_core::{DynamicGraph, QueryGraph};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid rate {0}: must lie in [0, 0.5] with at most one of insertion/deletion nonzero")]
    InvalidRate(f64),
    #[error("no connected region of {0} vertices to sample a query from")]
    Unsatisfiable(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum LabelDistribution {
    #[default]
    Uniform,
    Gaussian,
    Zipf,
}

/// Newman-Watts-Strogatz graph parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphParams {
    pub vertices: usize,
    /// Ring neighbours per vertex (even).
    pub ring_k: usize,
    /// Shortcut probability per ring edge.
    pub shortcut_p: f64,
    pub labels: u32,
    pub distribution: LabelDistribution,
    pub seed: u64,
}

/// `(k, p)` giving expected average degree `avg`: `k` is the largest even
/// number not above `avg` (at least 2) and each ring edge adds a shortcut
/// with probability `p = (avg - k) / k`.
pub fn ring_parameters(avg_degree: f64) -> (usize, f64) {
    let k = ((avg_degree / 2.0).floor() as usize * 2).max(2);
    let p = ((avg_degree - k as f64) / k as f64).max(0.0);
    (k, p)
}

impl GraphParams {
    pub fn with_avg_degree(
        vertices: usize,
        avg_degree: f64,
        labels: u32,
        distribution: LabelDistribution,
        seed: u64,
    ) -> Self {
        let (ring_k, shortcut_p) = ring_parameters(avg_degree);
        Self {
            vertices,
            ring_k,
            shortcut_p,
            labels,
            distribution,
            seed,
        }
    }
}

/// Independent stream of randomness derived from the master seed.
pub fn rng_for(seed: u64, purpose: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(purpose);
    r
}

/// Draws labels in `1..=labels`.
pub fn draw_labels(n: usize, labels: u32, dist: LabelDistribution, rng: &mut impl Rng) -> Vec<u32> {
    let s = labels as f64;
    match dist {
        LabelDistribution::Uniform => (0..n).map(|_| rng.random_range(1..=labels)).collect(),
        LabelDistribution::Gaussian => {
            let normal = Normal::new((s + 1.0) / 2.0, s / 6.0).expect("positive std");
            (0..n)
                .map(|_| loop {
                    let x = normal.sample(rng).round();
                    if (1.0..=s).contains(&x) {
                        break x as u32;
                    }
                })
                .collect()
        }
        LabelDistribution::Zipf => {
            let zipf = Zipf::new(s, 1.0).expect("valid zipf");
            (0..n).map(|_| zipf.sample(rng) as u32).collect()
        }
    }
}

pub fn generate_graph(p: &GraphParams) -> Result<DynamicGraph, GenError> {
    if p.ring_k == 0 || !p.ring_k.is_multiple_of(2) {
        return Err(GenError::InvalidParams(format!(
            "ring k must be even and positive, got {}",
            p.ring_k
        )));
    }
    if p.vertices < p.ring_k + 1 {
        return Err(GenError::InvalidParams(format!(
            "need at least k + 1 = {} vertices, got {}",
            p.ring_k + 1,
            p.vertices
        )));
    }
    if !(0.0..=1.0).contains(&p.shortcut_p) {
        return Err(GenError::InvalidParams(format!(
            "shortcut probability {} outside [0, 1]",
            p.shortcut_p
        )));
    }
    if p.labels == 0 {
        return Err(GenError::InvalidParams("need at least one label".into()));
    }
    let n = p.vertices;
    let mut rng = rng_for(p.seed, 1);
    let labels = draw_labels(n, p.labels, p.distribution, &mut rng);
    let mut g = DynamicGraph::new();
    for (i, &l) in labels.iter().enumerate() {
        g.add_vertex(VertexId(i as u32), Label(l)).expect("fresh vertex");
    }
    let mut ring = Vec::with_capacity(n * p.ring_k / 2);
    for i in 0..n {
        for j in 1..=p.ring_k / 2 {
            let w = (i + j) % n;
            if g.add_edge(VertexId(i as u32), VertexId(w as u32)).is_ok() {
                ring.push(i);
            }
        }
    }
    let mut rng = rng_for(p.seed, 2);
    for u in ring {
        if rng.random_bool(p.shortcut_p) {
            let w = rng.random_range(0..n);
            if w != u {
                // an existing edge is simply not duplicated
                let _ = g.add_edge(VertexId(u as u32), VertexId(w as u32));
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamKind {
    Insertion,
    Deletion,
}

/// Splits `g` into an initial graph and an update stream. With an insertion
/// rate, that fraction of edges is removed from `G_0` and replayed as
/// inserts; with a deletion rate, `G_0 = g` and the sampled edges are
/// deleted. Vertices are always kept in `G_0`.
pub fn split_stream(
    g: &DynamicGraph,
    insertion_rate: f64,
    deletion_rate: f64,
    seed: u64,
) -> Result<(DynamicGraph, Vec<UpdateOp>), GenError> {
    for r in [insertion_rate, deletion_rate] {
        if !(0.0..=0.5).contains(&r) {
            return Err(GenError::InvalidRate(r));
        }
    }
    if insertion_rate > 0.0 && deletion_rate > 0.0 {
        return Err(GenError::InvalidRate(deletion_rate));
    }
    let (kind, rate) = if insertion_rate > 0.0 {
        (StreamKind::Insertion, insertion_rate)
    } else {
        (StreamKind::Deletion, deletion_rate)
    };
    let mut edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    let count = (rate * edges.len() as f64).round() as usize;
    let mut rng = rng_for(seed, 3);
    edges.shuffle(&mut rng);
    edges.truncate(count);
    let mut g0 = g.clone();
    let mut stream = Vec::with_capacity(count);
    for (i, &(a, b)) in edges.iter().enumerate() {
        let mut op = match kind {
            StreamKind::Insertion => {
                let la = g.label(a).expect("vertex exists").0;
                let lb = g.label(b).expect("vertex exists").0;
                g0.apply_update(&UpdateOp::delete(a.0, b.0)).expect("edge exists");
                UpdateOp::insert_labeled(a.0, b.0, la, lb)
            }
            StreamKind::Deletion => UpdateOp::delete(a.0, b.0),
        };
        op.timestamp = i as u64 + 1;
        stream.push(op);
    }
    Ok((reset_clock(&g0), stream))
}

/// Copy of `g` with the update counter back at zero.
fn reset_clock(g: &DynamicGraph) -> DynamicGraph {
    let mut out = DynamicGraph::new();
    for (v, l) in g.vertices() {
        out.add_vertex(v, l).expect("fresh vertex");
    }
    for (a, b) in g.edges() {
        out.add_edge(a, b).expect("fresh edge");
    }
    out
}

const SAMPLE_ATTEMPTS: usize = 200;

/// Samples connected subgraphs of `g` with `size` vertices.
///
/// Vertices are collected by expanding from a random start through random
/// frontier vertices; the discovery edges form a spanning tree, and further
/// induced edges are added at random until the average degree reaches
/// `avg_degree` (or the induced edges run out).
pub fn sample_queries(
    g: &DynamicGraph,
    count: usize,
    size: usize,
    avg_degree: f64,
    seed: u64,
) -> Result<Vec<QueryGraph>, GenError> {
    if size < 2 {
        return Err(GenError::InvalidParams("queries need at least 2 vertices".into()));
    }
    let starts: Vec<VertexId> = g.vertex_ids().filter(|&v| g.degree(v) > 0).collect();
    if starts.is_empty() {
        return Err(GenError::Unsatisfiable(size));
    }
    let mut rng = rng_for(seed, 4);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let q = (0..SAMPLE_ATTEMPTS)
            .find_map(|_| sample_one(g, &starts, size, avg_degree, &mut rng))
            .ok_or(GenError::Unsatisfiable(size))?;
        out.push(q);
    }
    Ok(out)
}

fn sample_one(
    g: &DynamicGraph,
    starts: &[VertexId],
    size: usize,
    avg_degree: f64,
    rng: &mut impl Rng,
) -> Option<QueryGraph> {
    let start = *starts.choose(rng)?;
    let mut chosen = vec![start];
    let mut in_set: BTreeSet<VertexId> = [start].into();
    let mut tree = Vec::with_capacity(size - 1);
    while chosen.len() < size {
        // frontier edges leaving the chosen set
        let frontier: Vec<(usize, VertexId)> = chosen
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| g.neighbors(x).iter().map(move |&y| (i, y)))
            .filter(|(_, y)| !in_set.contains(y))
            .collect();
        let &(from, next) = frontier.choose(rng)?;
        in_set.insert(next);
        chosen.push(next);
        tree.push((from, chosen.len() - 1));
    }
    let tree_set: BTreeSet<(usize, usize)> = tree.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut extra: Vec<(usize, usize)> = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            if !tree_set.contains(&(i, j)) && g.has_edge(chosen[i], chosen[j]) {
                extra.push((i, j));
            }
        }
    }
    extra.shuffle(rng);
    let target = ((avg_degree * size as f64 / 2.0).round() as usize).max(size - 1);
    let keep = target.saturating_sub(size - 1).min(extra.len());
    let mut edges = tree;
    edges.extend_from_slice(&extra[..keep]);
    let labels = chosen.iter().map(|&v| g.label(v).expect("vertex exists")).collect();
    QueryGraph::new(labels, &edges).ok()
}
