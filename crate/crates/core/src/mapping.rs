//! Normalized query-to-data mappings, shared by the engine and the oracle.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::VertexId;
use crate::query::QueryGraph;

/// An injective map from query vertices to data vertices.
///
/// Position `i` holds the image of query vertex `i`, independent of the plan
/// order that produced it, so two mappings are equal iff they are the same
/// function. The derived `Ord` is the lexicographic output order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mapping(pub Vec<VertexId>);

impl Mapping {
    /// Builds the normalized form from a plan-ordered assignment.
    pub fn from_plan(plan: &[usize], assigned: &[VertexId]) -> Self {
        let mut out = alloc::vec![VertexId(0); plan.len()];
        for (&q, &v) in plan.iter().zip(assigned) {
            out[q] = v;
        }
        Mapping(out)
    }

    pub fn image(&self, q: usize) -> VertexId {
        self.0[q]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Data edges that are images of query edges, each as `(smaller, larger)`.
    pub fn edge_images<'a>(&'a self, query: &'a QueryGraph) -> impl Iterator<Item = (VertexId, VertexId)> + 'a {
        query
            .edges()
            .iter()
            .map(move |&(a, b)| crate::graph::ordered(self.0[a], self.0[b]))
    }

    /// Writes `match q0->v q1->v ...` using the query's original vertex ids.
    pub fn display<'a>(&'a self, query: &'a QueryGraph) -> MappingDisplay<'a> {
        MappingDisplay { m: self, q: query }
    }
}

pub struct MappingDisplay<'a> {
    m: &'a Mapping,
    q: &'a QueryGraph,
}

impl fmt::Display for MappingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("match")?;
        for (i, v) in self.m.0.iter().enumerate() {
            write!(f, " q{}->{}", self.q.original_id(i), v)?;
        }
        Ok(())
    }
}
