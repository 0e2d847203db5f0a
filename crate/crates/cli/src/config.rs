//! Command-line configuration shared by the subcommands.
//!
//! Every flag can also be set through an environment variable named
//! `DSM_<FLAG>` (upper case, dashes as underscores), e.g. `DSM_VERTICES`.

use clap::Args;

use dsm_core::matcher::DeletionMode;
use dsm_core::{DynamicGraph, EmbeddingConfig, EmbeddingMode, EngineConfig, QueryGraph, UpdateOp};

use crate::generate::{
    generate_graph, ring_parameters, sample_queries, split_stream, GenError, GraphParams, LabelDistribution,
};

/// Largest graph used by the desk-scale verification profile.
pub const DESK_VERTICES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum DeletionArg {
    #[default]
    Index,
    Scan,
}

#[derive(Clone, Debug, PartialEq, Args)]
pub struct EngineArgs {
    /// SPUR/SPAN dimension d.
    #[arg(long, env = "DSM_DIM", default_value_t = 2)]
    pub dim: usize,
    /// Ratio beta/alpha of the base-vector and raw terms.
    #[arg(long, env = "DSM_RATIO", default_value_t = 1000.0)]
    pub ratio: f64,
    /// Scale alpha of the raw SPUR/SPAN terms.
    #[arg(long, env = "DSM_ALPHA", default_value_t = 0.001)]
    pub alpha: f64,
    /// Number of degree groups m.
    #[arg(long, env = "DSM_GROUPS", default_value_t = 3)]
    pub groups: usize,
    /// Grid intervals per dimension K.
    #[arg(long, env = "DSM_CELLS", default_value_t = 5)]
    pub cells: usize,
    /// Embedding mode: plain, base or cost.
    #[arg(long, env = "DSM_MODE", default_value = "cost")]
    pub mode: EmbeddingMode,
    /// Salt mixed into every label seed.
    #[arg(long, env = "DSM_SALT", default_value_t = 0)]
    pub salt: u64,
    /// How answers touched by a deleted edge are located.
    #[arg(long, env = "DSM_DELETION", value_enum, default_value_t = DeletionArg::Index)]
    pub deletion: DeletionArg,
}

impl Default for EngineArgs {
    fn default() -> Self {
        Self {
            dim: 2,
            ratio: 1000.0,
            alpha: 0.001,
            groups: 3,
            cells: 5,
            mode: EmbeddingMode::CostModel,
            salt: 0,
            deletion: DeletionArg::Index,
        }
    }
}

impl EngineArgs {
    pub fn engine_config(&self) -> EngineConfig {
        let embedding = EmbeddingConfig {
            dim: self.dim,
            alpha: self.alpha,
            beta: self.alpha * self.ratio,
            mode: self.mode,
            seed_salt: self.salt,
            ..EmbeddingConfig::default()
        };
        EngineConfig {
            embedding,
            groups: self.groups,
            cells_per_dim: self.cells,
            deletion: match self.deletion {
                DeletionArg::Index => DeletionMode::Index,
                DeletionArg::Scan => DeletionMode::Scan,
            },
            ..EngineConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Args)]
pub struct DataArgs {
    /// Data graph size |V|.
    #[arg(long, env = "DSM_VERTICES", default_value_t = 50_000)]
    pub vertices: usize,
    /// Target average degree of the data graph.
    #[arg(long, env = "DSM_AVG_DEGREE", default_value_t = 5.0)]
    pub avg_degree: f64,
    /// Ring neighbours k (overrides the value derived from --avg-degree).
    #[arg(long, env = "DSM_RING_K")]
    pub ring_k: Option<usize>,
    /// Shortcut probability p (overrides the derived value).
    #[arg(long, env = "DSM_SHORTCUT_P")]
    pub shortcut_p: Option<f64>,
    /// Label alphabet size |Σ|.
    #[arg(long, env = "DSM_LABELS", default_value_t = 15)]
    pub labels: u32,
    #[arg(long, env = "DSM_LABEL_DIST", value_enum, default_value_t = LabelDistribution::Uniform)]
    pub label_dist: LabelDistribution,
    /// Number of sampled queries.
    #[arg(long, env = "DSM_QUERIES", default_value_t = 100)]
    pub queries: usize,
    /// Query size |V(q)|.
    #[arg(long, env = "DSM_QUERY_SIZE", default_value_t = 8)]
    pub query_size: usize,
    /// Target average degree of the queries.
    #[arg(long, env = "DSM_QUERY_AVG_DEGREE", default_value_t = 3.0)]
    pub query_avg_degree: f64,
    /// Fraction of edges replayed as insertions.
    #[arg(long, env = "DSM_INSERTION_RATE", default_value_t = 0.1)]
    pub insertion_rate: f64,
    /// Fraction of edges replayed as deletions (requires --insertion-rate 0).
    #[arg(long, env = "DSM_DELETION_RATE", default_value_t = 0.0)]
    pub deletion_rate: f64,
    /// Master seed for every generator.
    #[arg(long, env = "DSM_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Cap the graph at the desk-scale size.
    #[arg(long, env = "DSM_DESK")]
    pub desk: bool,
}

impl Default for DataArgs {
    fn default() -> Self {
        Self {
            vertices: 50_000,
            avg_degree: 5.0,
            ring_k: None,
            shortcut_p: None,
            labels: 15,
            label_dist: LabelDistribution::Uniform,
            queries: 100,
            query_size: 8,
            query_avg_degree: 3.0,
            insertion_rate: 0.1,
            deletion_rate: 0.0,
            seed: 1,
            desk: false,
        }
    }
}

impl DataArgs {
    pub fn effective_vertices(&self) -> usize {
        if self.desk {
            self.vertices.min(DESK_VERTICES)
        } else {
            self.vertices
        }
    }

    pub fn graph_params(&self) -> GraphParams {
        let (k, p) = ring_parameters(self.avg_degree);
        GraphParams {
            vertices: self.effective_vertices(),
            ring_k: self.ring_k.unwrap_or(k),
            shortcut_p: self.shortcut_p.unwrap_or(p),
            labels: self.labels,
            distribution: self.label_dist,
            seed: self.seed,
        }
    }

    /// Generates the full graph, splits it into `G_0` plus a stream and
    /// samples queries from the full graph.
    pub fn dataset(&self) -> Result<Dataset, GenError> {
        let graph = generate_graph(&self.graph_params())?;
        let (g0, stream) = split_stream(&graph, self.insertion_rate, self.deletion_rate, self.seed)?;
        let queries = sample_queries(&graph, self.queries, self.query_size, self.query_avg_degree, self.seed)?;
        Ok(Dataset {
            graph,
            g0,
            stream,
            queries,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub graph: DynamicGraph,
    pub g0: DynamicGraph,
    pub stream: Vec<UpdateOp>,
    pub queries: Vec<QueryGraph>,
}
