//! Continuous subgraph matching over a dynamic, vertex-labeled, undirected
//! graph.
//!
//! Every vertex carries a *dominance embedding* built from label-seeded
//! pseudo-random vectors: if a query star can be mapped into a data star, the
//! query embedding is componentwise `<=` the data embedding. Per-degree-group
//! grid synopses over these embeddings give candidate retrieval with no false
//! dismissals, and the candidate sets drive a left-deep join that keeps each
//! registered query's answer set exact under edge insertions and deletions.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, generators and the
//! command line live in the companion `dsm-cli` crate.
//!
//! Module map:
//!
//! * [`graph`]: the mutable data graph and update application.
//! * [`embedding`]: SPUR/SPAN/base vectors and the three embedding modes.
//! * [`das3`]: degree grouping, sorted neighbour lists, grid synopses.
//! * [`matcher`]: the engine (initial answers, insert/delete deltas).
//! * [`oracle`]: brute-force ground truth and stream verification.
//! * [`cost_model`]: the dominated-candidate estimator.

#![no_std]

extern crate alloc;

pub mod clock;
pub mod cost_model;
pub mod das3;
pub mod embedding;
pub mod graph;
pub mod mapping;
pub mod matcher;
pub mod oracle;
pub mod query;

pub use clock::{Clock, NoClock, StageTimes};
pub use embedding::{Embedder, EmbeddingConfig, EmbeddingMode, EmbeddingVector};
pub use graph::{DynamicGraph, Label, UpdateEffect, UpdateKind, UpdateOp, VertexId};
pub use mapping::Mapping;
pub use matcher::{Engine, EngineConfig, EngineError, QueryId, UpdateReport};
pub use query::QueryGraph;
