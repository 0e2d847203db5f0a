//! Answer sets with an edge-to-answer inverted index.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::graph::{ordered, VertexId};
use crate::mapping::Mapping;
use crate::query::QueryGraph;

type Edge = (VertexId, VertexId);

/// Mappings of one query, deduplicated, with every edge image indexed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnswerSet {
    by_id: BTreeMap<u64, Mapping>,
    ids: BTreeMap<Mapping, u64>,
    by_edge: BTreeMap<Edge, BTreeSet<u64>>,
    next_id: u64,
}

impl AnswerSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, m: &Mapping) -> bool {
        self.ids.contains_key(m)
    }

    /// Mappings in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Mapping> {
        self.ids.keys()
    }

    pub fn to_vec(&self) -> Vec<Mapping> {
        self.ids.keys().cloned().collect()
    }

    /// Adds a mapping; false if it was already present.
    pub fn insert(&mut self, m: Mapping, q: &QueryGraph) -> bool {
        if self.ids.contains_key(&m) {
            return false;
        }
        let id = self.next_id;
        self.next_id += 1;
        for e in m.edge_images(q) {
            self.by_edge.entry(e).or_default().insert(id);
        }
        self.ids.insert(m.clone(), id);
        self.by_id.insert(id, m);
        true
    }

    fn remove_id(&mut self, id: u64, q: &QueryGraph) -> Option<Mapping> {
        let m = self.by_id.remove(&id)?;
        self.ids.remove(&m);
        for e in m.edge_images(q) {
            if let Some(set) = self.by_edge.get_mut(&e) {
                set.remove(&id);
                if set.is_empty() {
                    self.by_edge.remove(&e);
                }
            }
        }
        Some(m)
    }

    /// Removes every mapping whose edge images include `(u, v)`, found
    /// through the inverted index. Returned in lexicographic order.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId, q: &QueryGraph) -> Vec<Mapping> {
        let ids: Vec<u64> = self
            .by_edge
            .get(&ordered(u, v))
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        let mut out: Vec<Mapping> = ids.into_iter().filter_map(|id| self.remove_id(id, q)).collect();
        out.sort_unstable();
        out
    }

    /// Same result as [`remove_edge`](Self::remove_edge) by testing every
    /// stored mapping.
    pub fn remove_edge_scan(&mut self, u: VertexId, v: VertexId, q: &QueryGraph) -> Vec<Mapping> {
        let e = ordered(u, v);
        let hits: Vec<u64> = self
            .by_id
            .iter()
            .filter(|(_, m)| m.edge_images(q).any(|x| x == e))
            .map(|(&id, _)| id)
            .collect();
        let mut out: Vec<Mapping> = hits.into_iter().filter_map(|id| self.remove_id(id, q)).collect();
        out.sort_unstable();
        out
    }

    /// The inverted index covers exactly the edge images of stored mappings.
    pub fn check_index(&self, q: &QueryGraph) -> bool {
        let mut expect: BTreeMap<Edge, BTreeSet<u64>> = BTreeMap::new();
        for (&id, m) in &self.by_id {
            for e in m.edge_images(q) {
                expect.entry(e).or_default().insert(id);
            }
        }
        expect == self.by_edge && self.by_id.len() == self.ids.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Label;
    use alloc::vec;

    fn path() -> QueryGraph {
        QueryGraph::new(vec![Label(0); 3], &[(0, 1), (1, 2)]).unwrap()
    }

    fn m(v: &[u32]) -> Mapping {
        Mapping(v.iter().map(|&x| VertexId(x)).collect())
    }

    #[test]
    fn index_and_scan_agree() {
        let q = path();
        let mut a = AnswerSet::new();
        assert!(a.insert(m(&[1, 2, 3]), &q));
        assert!(!a.insert(m(&[1, 2, 3]), &q));
        a.insert(m(&[3, 2, 1]), &q);
        a.insert(m(&[4, 1, 2]), &q);
        a.insert(m(&[5, 6, 7]), &q);
        assert!(a.check_index(&q));
        let mut b = a.clone();
        let x = a.remove_edge(VertexId(2), VertexId(1), &q);
        let y = b.remove_edge_scan(VertexId(1), VertexId(2), &q);
        assert_eq!(x, y);
        assert_eq!(x, vec![m(&[1, 2, 3]), m(&[3, 2, 1]), m(&[4, 1, 2])]);
        assert_eq!(a, b);
        assert_eq!(a.to_vec(), vec![m(&[5, 6, 7])]);
        assert!(a.check_index(&q));
        assert!(a.remove_edge(VertexId(1), VertexId(9), &q).is_empty());
    }
}
