//! Vertex dominance embeddings.
//!
//! A vertex `v` with label `l` and neighbours `N(v)` is embedded as
//!
//! * `Plain`:         `x(l) ‖ y(v)`
//! * `BaseOptimized`: `alpha * (x(l) ‖ y(v)) + beta * z(l)`
//! * `CostModel`:     as `BaseOptimized`, with Zipf-distributed SPUR vectors
//!
//! where `x(l)` is the label-seeded SPUR vector, `y(v) = sum of x over N(v)`
//! is the SPAN vector and `z(l)` an L1-normalized label-seeded base vector.
//! Since every SPUR component is positive, dropping neighbours can only lower
//! the SPAN part, so the embedding of any star substructure of `v` is
//! dominated (componentwise `<=`) by the embedding of `v`'s full star.
//!
//! SPUR components live on the `2^-24` grid, which keeps every SPAN sum and
//! every prefix sum over SPUR components exact in `f64`.

pub mod mixer;
pub mod zipf;

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{DynamicGraph, Label, VertexId};
use mixer::Stream;
pub use zipf::ZipfTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EmbeddingMode {
    Plain,
    BaseOptimized,
    CostModel,
}

impl EmbeddingMode {
    pub const ALL: [EmbeddingMode; 3] = [Self::Plain, Self::BaseOptimized, Self::CostModel];

    pub fn name(self) -> &'static str {
        match self {
            Self::Plain => "plain",
            Self::BaseOptimized => "base",
            Self::CostModel => "cost",
        }
    }

    pub fn uses_base(self) -> bool {
        self != Self::Plain
    }
}

impl core::str::FromStr for EmbeddingMode {
    type Err = EmbeddingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Self::Plain),
            "base" | "base-optimized" => Ok(Self::BaseOptimized),
            "cost" | "cost-model" => Ok(Self::CostModel),
            _ => Err(EmbeddingError::UnknownMode),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmbeddingConfig {
    /// Dimension of the SPUR and SPAN parts; embeddings have `2 * dim`.
    pub dim: usize,
    pub alpha: f64,
    pub beta: f64,
    pub mode: EmbeddingMode,
    pub zipf_exponent: f64,
    pub zipf_ranks: u32,
    pub zipf_buckets: u32,
    pub seed_salt: u64,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            dim: 2,
            alpha: 0.001,
            beta: 1.0,
            mode: EmbeddingMode::CostModel,
            zipf_exponent: 1.2,
            zipf_ranks: 1024,
            zipf_buckets: 64,
            seed_salt: 0,
        }
    }
}

impl EmbeddingConfig {
    pub fn with_mode(self, mode: EmbeddingMode) -> Self {
        Self { mode, ..self }
    }

    pub fn validate(&self) -> Result<(), EmbeddingError> {
        if self.dim == 0 {
            return Err(EmbeddingError::InvalidConfig("dim must be at least 1"));
        }
        if self.mode.uses_base() {
            if !(self.alpha > 0.0 && self.beta > 0.0) {
                return Err(EmbeddingError::InvalidConfig("alpha and beta must be positive"));
            }
            if self.beta / self.alpha < 10.0 {
                return Err(EmbeddingError::InvalidConfig("beta/alpha must be at least 10"));
            }
        }
        if self.mode == EmbeddingMode::CostModel {
            if !(self.zipf_buckets >= 1 && self.zipf_ranks >= self.zipf_buckets) {
                return Err(EmbeddingError::InvalidConfig("need zipf_ranks >= zipf_buckets >= 1"));
            }
            if self.zipf_exponent.is_nan() || self.zipf_exponent <= 0.0 {
                return Err(EmbeddingError::InvalidConfig("zipf exponent must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("invalid embedding config: {0}")]
    InvalidConfig(&'static str),
    #[error("unknown embedding mode")]
    UnknownMode,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vectors of dimension {0} and {1} are not comparable")]
    DimensionMismatch(usize, usize),
    #[error("SPAN component {component} would become negative")]
    NegativeComponent { component: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpurVector(pub Vec<f64>);

#[derive(Clone, Debug, PartialEq)]
pub struct SpanVector(pub Vec<f64>);

impl SpanVector {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseVector(pub Vec<f64>);

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingVector {
    pub values: Vec<f64>,
    pub mode: EmbeddingMode,
}

impl EmbeddingVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanDirection {
    Add,
    Remove,
}

/// Slack below zero tolerated when removing a SPUR contribution.
pub const SPAN_UNDERFLOW_TOLERANCE: f64 = 1e-9;

/// The single affine map used for every embedded coordinate, so that
/// embeddings, UB corners and MBR bounds round identically.
#[inline]
pub fn affine(cfg: &EmbeddingConfig, raw: f64, base: f64) -> f64 {
    match cfg.mode {
        EmbeddingMode::Plain => raw,
        _ => cfg.alpha * raw + cfg.beta * base,
    }
}

/// Concatenates `x ‖ y` and applies the mode's affine map.
///
/// `base` is ignored in `Plain` mode and required otherwise.
pub fn embed(x: &SpurVector, y: &SpanVector, base: Option<&BaseVector>, cfg: &EmbeddingConfig) -> EmbeddingVector {
    let raw = x.0.iter().chain(y.0.iter());
    let values = match (cfg.mode, base) {
        (EmbeddingMode::Plain, _) => raw.copied().collect(),
        (_, Some(z)) => raw.zip(&z.0).map(|(&r, &b)| affine(cfg, r, b)).collect(),
        (_, None) => panic!("base vector required outside plain mode"),
    };
    EmbeddingVector { values, mode: cfg.mode }
}

/// `a` dominates `b` when `a[j] <= b[j]` on every dimension (equality
/// included).
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool, EmbeddingError> {
    if a.len() != b.len() {
        return Err(EmbeddingError::DimensionMismatch(a.len(), b.len()));
    }
    Ok(dominated(a, b))
}

#[inline]
pub(crate) fn dominated(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Sort key of a point: the sum of squared components.
pub fn key(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// One Zipf draw for a seed. Builds the rank table on every call; use
/// [`ZipfTable`] directly for repeated draws.
pub fn seeded_zipf_draw(seed: u64, cfg: &EmbeddingConfig) -> f64 {
    ZipfTable::new(cfg.zipf_exponent, cfg.zipf_ranks, cfg.zipf_buckets).draw(seed)
}

/// Generates SPUR, SPAN, base vectors and embeddings for one configuration.
#[derive(Clone, Debug)]
pub struct Embedder {
    cfg: EmbeddingConfig,
    zipf: Option<ZipfTable>,
}

impl Embedder {
    pub fn new(cfg: EmbeddingConfig) -> Result<Self, EmbeddingError> {
        cfg.validate()?;
        let zipf = (cfg.mode == EmbeddingMode::CostModel)
            .then(|| ZipfTable::new(cfg.zipf_exponent, cfg.zipf_ranks, cfg.zipf_buckets));
        Ok(Self { cfg, zipf })
    }

    pub fn config(&self) -> &EmbeddingConfig {
        &self.cfg
    }

    pub fn dim(&self) -> usize {
        self.cfg.dim
    }

    pub fn mode(&self) -> EmbeddingMode {
        self.cfg.mode
    }

    /// SPUR vector of a label; every component is in `(0, 1]`.
    pub fn spur(&self, label: Label) -> SpurVector {
        let salt = self.cfg.seed_salt;
        let x = (0..self.cfg.dim)
            .map(|k| match &self.zipf {
                Some(t) => t.draw_ticks(mixer::seed(salt, Stream::SpurZipf, label.0, k)) as f64 / mixer::UNIT_SCALE,
                None => mixer::unit(mixer::seed(salt, Stream::Spur, label.0, k)),
            })
            .collect();
        SpurVector(x)
    }

    /// L1-normalized base vector of `2 * dim` positive components.
    pub fn base(&self, label: Label) -> BaseVector {
        let raw: Vec<f64> = (0..2 * self.cfg.dim)
            .map(|j| mixer::unit(mixer::seed(self.cfg.seed_salt, Stream::Base, label.0, j)))
            .collect();
        normalize_l1(raw)
    }

    /// SPAN vector summed over the given neighbour labels.
    pub fn span_of_labels(&self, labels: impl IntoIterator<Item = Label>) -> SpanVector {
        let mut y = SpanVector::zeros(self.cfg.dim);
        for l in labels {
            for (acc, x) in y.0.iter_mut().zip(self.spur(l).0) {
                *acc += x;
            }
        }
        y
    }

    pub fn span(&self, g: &DynamicGraph, v: VertexId) -> Result<SpanVector, EmbeddingError> {
        if !g.contains_vertex(v) {
            return Err(EmbeddingError::UnknownVertex(v));
        }
        Ok(self.span_of_labels(
            g.neighbors(v)
                .iter()
                .map(|&n| g.label(n).expect("neighbour registered")),
        ))
    }

    /// Adds or removes one neighbour's SPUR contribution in `O(dim)`.
    pub fn update_span(
        &self,
        y: &mut SpanVector,
        neighbor: Label,
        direction: SpanDirection,
    ) -> Result<(), EmbeddingError> {
        let x = self.spur(neighbor);
        match direction {
            SpanDirection::Add => {
                for (acc, v) in y.0.iter_mut().zip(x.0) {
                    *acc += v;
                }
            }
            SpanDirection::Remove => {
                if let Some(component) =
                    y.0.iter()
                        .zip(&x.0)
                        .position(|(a, v)| a - v < -SPAN_UNDERFLOW_TOLERANCE)
                {
                    return Err(EmbeddingError::NegativeComponent { component });
                }
                for (acc, v) in y.0.iter_mut().zip(x.0) {
                    *acc = (*acc - v).max(0.0);
                }
            }
        }
        Ok(())
    }

    pub fn embed(&self, x: &SpurVector, y: &SpanVector, label: Label) -> EmbeddingVector {
        if self.cfg.mode.uses_base() {
            embed(x, y, Some(&self.base(label)), &self.cfg)
        } else {
            embed(x, y, None, &self.cfg)
        }
    }

    /// Embedding of a star with the given centre label and leaf labels.
    pub fn embed_star(&self, center: Label, leaves: impl IntoIterator<Item = Label>) -> EmbeddingVector {
        self.embed(&self.spur(center), &self.span_of_labels(leaves), center)
    }

    pub fn embed_vertex(&self, g: &DynamicGraph, v: VertexId) -> Result<EmbeddingVector, EmbeddingError> {
        let label = g.label(v).ok_or(EmbeddingError::UnknownVertex(v))?;
        Ok(self.embed(&self.spur(label), &self.span(g, v)?, label))
    }

    /// Embedded value of raw coordinate `raw` on dimension `j`.
    #[inline]
    pub fn embed_coord(&self, raw: f64, base: &BaseVector, j: usize) -> f64 {
        affine(&self.cfg, raw, base.0[j])
    }
}

fn normalize_l1(raw: Vec<f64>) -> BaseVector {
    let norm: f64 = raw.iter().sum();
    BaseVector(raw.into_iter().map(|v| v / norm).collect())
}
