//! The dynamic data graph.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

/// Vertex identifier of the data graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Integer-encoded vertex label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// A single edge insertion or deletion.
///
/// Labels are only consulted for endpoints that do not exist yet; for an
/// existing endpoint a supplied label must agree with the stored one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpdateOp {
    pub kind: UpdateKind,
    pub u: VertexId,
    pub v: VertexId,
    pub label_u: Option<Label>,
    pub label_v: Option<Label>,
    pub timestamp: u64,
}

impl UpdateOp {
    pub fn insert(u: u32, v: u32) -> Self {
        Self {
            kind: UpdateKind::Insert,
            u: VertexId(u),
            v: VertexId(v),
            label_u: None,
            label_v: None,
            timestamp: 0,
        }
    }

    pub fn insert_labeled(u: u32, v: u32, label_u: u32, label_v: u32) -> Self {
        Self {
            label_u: Some(Label(label_u)),
            label_v: Some(Label(label_v)),
            ..Self::insert(u, v)
        }
    }

    pub fn delete(u: u32, v: u32) -> Self {
        Self {
            kind: UpdateKind::Delete,
            ..Self::insert(u, v)
        }
    }

    pub fn edge(&self) -> (VertexId, VertexId) {
        ordered(self.u, self.v)
    }
}

/// Degree change of one endpoint of an applied update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndpointChange {
    pub vertex: VertexId,
    pub label: Label,
    pub old_degree: usize,
    pub new_degree: usize,
}

/// What an applied update did to the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateEffect {
    pub kind: UpdateKind,
    /// The two endpoints, in the order `(op.u, op.v)`.
    pub endpoints: [EndpointChange; 2],
    pub created: Vec<VertexId>,
    pub isolated: Vec<VertexId>,
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) already exists")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(VertexId, VertexId),
    #[error("new vertex {0} arrived without a label")]
    MissingLabel(VertexId),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {vertex} has label {existing}, update supplied {supplied}")]
    LabelConflict {
        vertex: VertexId,
        existing: Label,
        supplied: Label,
    },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct VertexRecord {
    label: Label,
    // sorted, no duplicates
    adj: Vec<VertexId>,
}

/// Mutable undirected vertex-labeled graph.
///
/// Adjacency lists are kept sorted, so edge membership is a binary search on
/// the shorter list. Vertices whose degree drops to zero are kept, together
/// with their label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DynamicGraph {
    vertices: BTreeMap<VertexId, VertexRecord>,
    edge_count: usize,
    timestamp: u64,
}

pub(crate) fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DynamicGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of updates applied so far.
    pub fn timestamp(&self) -> u64 {
        self.timestamp
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn label(&self, v: VertexId) -> Option<Label> {
        self.vertices.get(&v).map(|r| r.label)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices.get(&v).map_or(0, |r| r.adj.len())
    }

    /// Sorted neighbours of `v` (empty for unknown vertices).
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.vertices.get(&v).map_or(&[], |r| r.adj.as_slice())
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, Label)> + '_ {
        self.vertices.iter().map(|(&v, r)| (v, r.label))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    /// Every edge once, as `(smaller, larger)`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices
            .iter()
            .flat_map(|(&u, r)| r.adj.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.vertices.values().map(|r| r.adj.len()).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (Some(a), Some(b)) = (self.vertices.get(&u), self.vertices.get(&v)) else {
            return false;
        };
        if a.adj.len() <= b.adj.len() {
            a.adj.binary_search(&v).is_ok()
        } else {
            b.adj.binary_search(&u).is_ok()
        }
    }

    /// Registers a vertex, or checks the label of an existing one.
    pub fn add_vertex(&mut self, v: VertexId, label: Label) -> Result<bool, GraphError> {
        match self.vertices.get(&v) {
            Some(r) if r.label != label => Err(GraphError::LabelConflict {
                vertex: v,
                existing: r.label,
                supplied: label,
            }),
            Some(_) => Ok(false),
            None => {
                self.vertices.insert(v, VertexRecord { label, adj: Vec::new() });
                Ok(true)
            }
        }
    }

    /// Adds an edge between two registered vertices without advancing the
    /// timestamp (used while loading an initial graph).
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for x in [u, v] {
            if !self.vertices.contains_key(&x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        if self.has_edge(u, v) {
            let (a, b) = ordered(u, v);
            return Err(GraphError::DuplicateEdge(a, b));
        }
        self.link(u, v);
        Ok(())
    }

    fn link(&mut self, u: VertexId, v: VertexId) {
        for (a, b) in [(u, v), (v, u)] {
            let adj = &mut self.vertices.get_mut(&a).expect("endpoint registered").adj;
            let pos = adj.binary_search(&b).unwrap_err();
            adj.insert(pos, b);
        }
        self.edge_count += 1;
    }

    fn unlink(&mut self, u: VertexId, v: VertexId) {
        for (a, b) in [(u, v), (v, u)] {
            let adj = &mut self.vertices.get_mut(&a).expect("endpoint registered").adj;
            let pos = adj.binary_search(&b).expect("edge present");
            adj.remove(pos);
        }
        self.edge_count -= 1;
    }

    fn check_label(&self, v: VertexId, supplied: Option<Label>) -> Result<Option<Label>, GraphError> {
        match (self.vertices.get(&v), supplied) {
            (Some(r), Some(l)) if r.label != l => Err(GraphError::LabelConflict {
                vertex: v,
                existing: r.label,
                supplied: l,
            }),
            (Some(_), _) => Ok(None),
            (None, Some(l)) => Ok(Some(l)),
            (None, None) => Err(GraphError::MissingLabel(v)),
        }
    }

    /// Applies one update. On error the graph is left untouched.
    pub fn apply_update(&mut self, op: &UpdateOp) -> Result<UpdateEffect, GraphError> {
        let (u, v) = (op.u, op.v);
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let old = [self.degree(u), self.degree(v)];
        let mut created = Vec::new();
        match op.kind {
            UpdateKind::Insert => {
                let new_u = self.check_label(u, op.label_u)?;
                let new_v = self.check_label(v, op.label_v)?;
                if self.has_edge(u, v) {
                    let (a, b) = ordered(u, v);
                    return Err(GraphError::DuplicateEdge(a, b));
                }
                for (x, l) in [(u, new_u), (v, new_v)] {
                    if let Some(l) = l {
                        self.add_vertex(x, l)?;
                        created.push(x);
                    }
                }
                self.link(u, v);
            }
            UpdateKind::Delete => {
                if !self.has_edge(u, v) {
                    let (a, b) = ordered(u, v);
                    return Err(GraphError::MissingEdge(a, b));
                }
                self.unlink(u, v);
            }
        }
        self.timestamp += 1;
        let change = |x: VertexId, old_degree: usize| EndpointChange {
            vertex: x,
            label: self.label(x).expect("endpoint registered"),
            old_degree,
            new_degree: self.degree(x),
        };
        let endpoints = [change(u, old[0]), change(v, old[1])];
        let isolated = endpoints
            .iter()
            .filter(|c| c.new_degree == 0)
            .map(|c| c.vertex)
            .collect();
        Ok(UpdateEffect {
            kind: op.kind,
            endpoints,
            created,
            isolated,
            timestamp: self.timestamp,
        })
    }

    /// Checks the structural invariants (symmetry, no self-loops, sorted
    /// duplicate-free adjacency, edge count). Used by tests.
    pub fn check_invariants(&self) -> bool {
        let mut twice = 0usize;
        for (&u, r) in &self.vertices {
            if r.adj.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in &r.adj {
                if v == u || self.vertices.get(&v).is_none_or(|o| o.adj.binary_search(&u).is_err()) {
                    return false;
                }
            }
            twice += r.adj.len();
        }
        twice == 2 * self.edge_count
    }
}
