//! Ground truth by plain backtracking.
//!
//! Nothing here touches embeddings or synopses except [`stars`], which
//! enumerates substructure embeddings to check the bounds the synopses use.

pub mod stars;
pub mod stream;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::graph::{DynamicGraph, VertexId};
use crate::mapping::Mapping;
use crate::query::QueryGraph;

pub use stars::{enumerate_substructure_embeddings, OracleError, MAX_STAR_DEGREE};
pub use stream::{recompute_stream_check, Verdict};

/// Every injective, label- and edge-preserving mapping of `q` into `g`.
///
/// Query vertices are assigned in ascending index order restricted to those
/// adjacent to an assigned one.
pub fn enumerate_matches(g: &DynamicGraph, q: &QueryGraph) -> BTreeSet<Mapping> {
    let n = q.len();
    let mut out = BTreeSet::new();
    if n > g.vertex_count() {
        return out;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = alloc::vec![false; n];
    order.push(0);
    placed[0] = true;
    while order.len() < n {
        let next = (0..n)
            .find(|&u| !placed[u] && q.neighbors(u).iter().any(|&w| placed[w]))
            .expect("query is connected");
        placed[next] = true;
        order.push(next);
    }
    let mut image: Vec<Option<VertexId>> = alloc::vec![None; n];
    backtrack(g, q, &order, 0, &mut image, &mut out);
    out
}

fn backtrack(
    g: &DynamicGraph,
    q: &QueryGraph,
    order: &[usize],
    depth: usize,
    image: &mut Vec<Option<VertexId>>,
    out: &mut BTreeSet<Mapping>,
) {
    if depth == order.len() {
        out.insert(Mapping(image.iter().map(|v| v.expect("complete")).collect()));
        return;
    }
    let u = order[depth];
    let label = q.label(u);
    let fits = |c: VertexId, image: &[Option<VertexId>]| {
        g.label(c) == Some(label)
            && !image.contains(&Some(c))
            && q.neighbors(u)
                .iter()
                .all(|&w| image[w].is_none_or(|x| g.has_edge(x, c)))
    };
    let pool: Vec<VertexId> = match q.neighbors(u).iter().find_map(|&w| image[w]) {
        Some(x) => g.neighbors(x).to_vec(),
        None => g.vertex_ids().collect(),
    };
    for c in pool {
        if fits(c, image) {
            image[u] = Some(c);
            backtrack(g, q, order, depth + 1, image, out);
            image[u] = None;
        }
    }
}

/// Injective, label-preserving and edge-preserving in `g`.
pub fn is_valid_mapping(g: &DynamicGraph, q: &QueryGraph, m: &Mapping) -> bool {
    let distinct: BTreeSet<_> = m.0.iter().collect();
    m.len() == q.len()
        && distinct.len() == m.len()
        && (0..q.len()).all(|u| g.label(m.image(u)) == Some(q.label(u)))
        && q.edges().iter().all(|&(a, b)| g.has_edge(m.image(a), m.image(b)))
}
