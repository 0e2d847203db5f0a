//! Left-deep join over a plan.

use alloc::vec::Vec;

use crate::graph::{DynamicGraph, VertexId};
use crate::mapping::Mapping;
use crate::query::QueryGraph;

/// A plan with, for each position, the earlier plan positions adjacent in
/// the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Steps {
    pub plan: Vec<usize>,
    back: Vec<Vec<usize>>,
}

impl Steps {
    pub fn new(q: &QueryGraph, plan: Vec<usize>) -> Self {
        let back = (0..plan.len())
            .map(|n| (0..n).filter(|&i| q.has_edge(plan[i], plan[n])).collect())
            .collect();
        Self { plan, back }
    }

    pub fn len(&self) -> usize {
        self.plan.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plan.is_empty()
    }
}

/// Extends `assigned` (the images of `plan[..assigned.len()]`) to full
/// mappings.
///
/// Position 0, if unassigned, draws from `roots`. Later positions draw from
/// the neighbours of an already mapped query neighbour and must be unused,
/// carry the right label, be adjacent to every mapped query neighbour and
/// pass `admit(query_vertex, data_vertex)`.
pub fn extend<F>(
    q: &QueryGraph,
    steps: &Steps,
    g: &DynamicGraph,
    roots: &[VertexId],
    assigned: &mut Vec<VertexId>,
    admit: &mut F,
    out: &mut Vec<Mapping>,
) where
    F: FnMut(usize, VertexId) -> bool,
{
    let n = assigned.len();
    if n == steps.len() {
        out.push(Mapping::from_plan(&steps.plan, assigned));
        return;
    }
    let u = steps.plan[n];
    let label = q.label(u);
    if n == 0 {
        for &c in roots {
            if g.label(c) == Some(label) && admit(u, c) {
                assigned.push(c);
                extend(q, steps, g, roots, assigned, admit, out);
                assigned.pop();
            }
        }
        return;
    }
    let back = &steps.back[n];
    let anchor = *back
        .iter()
        .min_by_key(|&&i| g.degree(assigned[i]))
        .expect("plan prefix is connected");
    for &c in g.neighbors(assigned[anchor]) {
        if g.label(c) != Some(label) || assigned.contains(&c) {
            continue;
        }
        if !back.iter().all(|&i| i == anchor || g.has_edge(assigned[i], c)) {
            continue;
        }
        if !admit(u, c) {
            continue;
        }
        assigned.push(c);
        extend(q, steps, g, roots, assigned, admit, out);
        assigned.pop();
    }
}

/// All mappings extending `seed` whose vertices lie in the candidate sets.
pub fn refine(
    q: &QueryGraph,
    plan: &[usize],
    g: &DynamicGraph,
    seed: &[VertexId],
    candidates: &[Vec<VertexId>],
) -> Vec<Mapping> {
    let steps = Steps::new(q, plan.to_vec());
    let mut assigned = seed.to_vec();
    let mut out = Vec::new();
    let roots = &candidates[plan[0]];
    let mut admit = |u: usize, c: VertexId| candidates[u].binary_search(&c).is_ok();
    extend(q, &steps, g, roots, &mut assigned, &mut admit, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}
