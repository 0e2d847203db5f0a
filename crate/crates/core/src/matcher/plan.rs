//! Greedy join order.

use alloc::vec;
use alloc::vec::Vec;

use crate::query::QueryGraph;

/// Visits query vertices starting from the one with the smallest candidate
/// set, then repeatedly the adjacent vertex with the smallest set. Ties go to
/// the smaller vertex index.
pub fn make_plan(q: &QueryGraph, sizes: &[usize]) -> Vec<usize> {
    let start = (0..q.len()).min_by_key(|&i| (sizes[i], i)).expect("query is non-empty");
    make_plan_from(q, &[start], sizes)
}

/// Greedy continuation of a fixed connected prefix.
pub fn make_plan_from(q: &QueryGraph, prefix: &[usize], sizes: &[usize]) -> Vec<usize> {
    let n = q.len();
    let mut placed = vec![false; n];
    let mut frontier = vec![false; n];
    let mut plan = Vec::with_capacity(n);
    let push = |u: usize, plan: &mut Vec<usize>, placed: &mut Vec<bool>, frontier: &mut Vec<bool>| {
        plan.push(u);
        placed[u] = true;
        for &w in q.neighbors(u) {
            frontier[w] = true;
        }
    };
    for &u in prefix {
        push(u, &mut plan, &mut placed, &mut frontier);
    }
    while plan.len() < n {
        let next = (0..n)
            .filter(|&u| frontier[u] && !placed[u])
            .min_by_key(|&u| (sizes[u], u))
            .expect("query is connected");
        push(next, &mut plan, &mut placed, &mut frontier);
    }
    plan
}

/// Every vertex after the first is adjacent to an earlier one and each
/// vertex appears once.
pub fn is_valid_plan(q: &QueryGraph, plan: &[usize]) -> bool {
    let mut seen = vec![false; q.len()];
    for (i, &u) in plan.iter().enumerate() {
        if u >= q.len() || seen[u] {
            return false;
        }
        if i > 0 && !plan[..i].iter().any(|&p| q.has_edge(p, u)) {
            return false;
        }
        seen[u] = true;
    }
    plan.len() == q.len()
}
