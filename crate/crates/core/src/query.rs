//! Query graphs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{DynamicGraph, Label, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("query graph has no vertices")]
    Empty,
    #[error("query graph is not connected")]
    Disconnected,
    #[error("query vertex {0} has no incident edge")]
    IsolatedVertex(u64),
    #[error("query edge references vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop on query vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate query edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
}

/// A connected query pattern with dense vertex indices `0..n`.
///
/// The original ids (as read from a file) are kept for output only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryGraph {
    labels: Vec<Label>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    ids: Vec<u64>,
}

impl QueryGraph {
    /// Builds a query from labels and edges over indices `0..labels.len()`.
    pub fn new(labels: Vec<Label>, edges: &[(usize, usize)]) -> Result<Self, QueryError> {
        let ids = (0..labels.len() as u64).collect();
        Self::with_ids(labels, edges, ids)
    }

    fn with_ids(labels: Vec<Label>, edges: &[(usize, usize)], ids: Vec<u64>) -> Result<Self, QueryError> {
        let n = labels.len();
        if n == 0 {
            return Err(QueryError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(QueryError::VertexOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(QueryError::SelfLoop(a));
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if adj[a].contains(&b) {
                return Err(QueryError::DuplicateEdge(a, b));
            }
            adj[a].push(b);
            adj[b].push(a);
            list.push((a, b));
        }
        for (i, nb) in adj.iter_mut().enumerate() {
            if nb.is_empty() && n > 1 {
                return Err(QueryError::IsolatedVertex(ids[i]));
            }
            nb.sort_unstable();
        }
        if n == 1 {
            return Err(QueryError::IsolatedVertex(ids[0]));
        }
        list.sort_unstable();
        let q = Self {
            labels,
            adj,
            edges: list,
            ids,
        };
        if !q.is_connected() {
            return Err(QueryError::Disconnected);
        }
        Ok(q)
    }

    /// Turns a small labeled graph into a query, renumbering vertices densely
    /// in ascending id order.
    pub fn from_graph(g: &DynamicGraph) -> Result<Self, QueryError> {
        let index: BTreeMap<VertexId, usize> = g.vertex_ids().enumerate().map(|(i, v)| (v, i)).collect();
        let labels = g.vertices().map(|(_, l)| l).collect();
        let ids = g.vertex_ids().map(|v| u64::from(v.0)).collect();
        let edges: Vec<_> = g.edges().map(|(a, b)| (index[&a], index[&b])).collect();
        Self::with_ids(labels, &edges, ids)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, q: usize) -> Label {
        self.labels[q]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adj[q].len()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adj[q]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(smaller, larger)` index pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn original_id(&self, q: usize) -> u64 {
        self.ids[q]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        let l = |n: usize| vec![Label(0); n];
        assert_eq!(QueryGraph::new(vec![], &[]), Err(QueryError::Empty));
        assert_eq!(QueryGraph::new(l(1), &[]), Err(QueryError::IsolatedVertex(0)));
        assert_eq!(QueryGraph::new(l(4), &[(0, 1), (2, 3)]), Err(QueryError::Disconnected));
        assert_eq!(
            QueryGraph::new(l(2), &[(0, 1), (1, 0)]),
            Err(QueryError::DuplicateEdge(0, 1))
        );
        assert_eq!(QueryGraph::new(l(2), &[(1, 1)]), Err(QueryError::SelfLoop(1)));
    }

    #[test]
    fn from_graph_renumbers() {
        let mut g = DynamicGraph::new();
        g.add_vertex(VertexId(10), Label(1)).unwrap();
        g.add_vertex(VertexId(4), Label(2)).unwrap();
        g.add_edge(VertexId(10), VertexId(4)).unwrap();
        let q = QueryGraph::from_graph(&g).unwrap();
        assert_eq!(q.labels(), &[Label(2), Label(1)]);
        assert_eq!(q.original_id(1), 10);
        assert_eq!(q.edges(), &[(0, 1)]);
    }
}
