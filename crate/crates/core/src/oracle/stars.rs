//! Exhaustive star substructure embeddings.

use alloc::vec::Vec;

use crate::embedding::{Embedder, EmbeddingVector};
use crate::graph::{DynamicGraph, Label, VertexId};

/// Largest degree whose substructures are enumerated.
pub const MAX_STAR_DEGREE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("degree {0} is above the enumeration limit")]
    DegreeTooLarge(usize),
    #[error("substructure size {delta} outside 1..={degree}")]
    DeltaOutOfRange { delta: usize, degree: usize },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
}

/// Embeddings of every star substructure of `v` with exactly `delta` leaves.
pub fn enumerate_substructure_embeddings(
    g: &DynamicGraph,
    v: VertexId,
    delta: usize,
    embedder: &Embedder,
) -> Result<Vec<EmbeddingVector>, OracleError> {
    let center = g.label(v).ok_or(OracleError::UnknownVertex(v))?;
    let leaves: Vec<Label> = g
        .neighbors(v)
        .iter()
        .map(|&n| g.label(n).expect("registered"))
        .collect();
    let deg = leaves.len();
    if deg > MAX_STAR_DEGREE {
        return Err(OracleError::DegreeTooLarge(deg));
    }
    if delta == 0 || delta > deg {
        return Err(OracleError::DeltaOutOfRange { delta, degree: deg });
    }
    Ok((0u32..1 << deg)
        .filter(|mask| mask.count_ones() as usize == delta)
        .map(|mask| {
            let chosen = (0..deg).filter(|i| mask >> i & 1 == 1).map(|i| leaves[i]);
            embedder.embed_star(center, chosen)
        })
        .collect())
}

/// Componentwise minimum and maximum of a non-empty set of vectors.
pub fn bounds(vectors: &[EmbeddingVector]) -> (Vec<f64>, Vec<f64>) {
    let mut low = vectors[0].values.clone();
    let mut high = low.clone();
    for v in &vectors[1..] {
        for (j, &x) in v.values.iter().enumerate() {
            low[j] = low[j].min(x);
            high[j] = high[j].max(x);
        }
    }
    (low, high)
}
