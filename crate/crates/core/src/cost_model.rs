//! Estimated number of data embeddings dominated by a query embedding.
//!
//! Each dimension of the data embeddings is treated as an independent normal
//! variable with the sample mean and variance of the snapshot, giving
//!
//! ```text
//! cost = |V| * prod_j Phi((mu_j - q_j) / s_j)
//! ```
//!
//! where `s_j` is the variance (the default) or the standard deviation.

use alloc::vec::Vec;

use crate::embedding::Embedder;
use crate::graph::DynamicGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CostError {
    #[error("need at least two vertices, got {0}")]
    TooFewVertices(usize),
    #[error("dimension {0} has zero variance")]
    DegenerateVariance(usize),
    #[error("query has {0} dimensions, statistics have {1}")]
    DimensionMismatch(usize, usize),
}

/// Per-dimension sample mean and unbiased variance.
#[derive(Clone, Debug, PartialEq)]
pub struct DimStats {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Divisor {
    #[default]
    Variance,
    StdDev,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostEstimate {
    pub estimate: f64,
    pub factors: Vec<f64>,
}

/// Standard normal CDF.
pub fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

pub fn collect_stats<'a>(embeddings: impl IntoIterator<Item = &'a [f64]>) -> Result<DimStats, CostError> {
    let rows: Vec<&[f64]> = embeddings.into_iter().collect();
    let n = rows.len();
    if n < 2 {
        return Err(CostError::TooFewVertices(n));
    }
    let dims = rows[0].len();
    let mut mean = alloc::vec![0.0; dims];
    for r in &rows {
        for (m, x) in mean.iter_mut().zip(r.iter()) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut variance = alloc::vec![0.0; dims];
    for r in &rows {
        for ((v, x), m) in variance.iter_mut().zip(r.iter()).zip(&mean) {
            *v += (x - m) * (x - m);
        }
    }
    for v in &mut variance {
        *v /= (n - 1) as f64;
    }
    Ok(DimStats {
        mean,
        variance,
        count: n,
    })
}

/// Statistics over the full-star embeddings of every vertex of `g`.
pub fn graph_stats(g: &DynamicGraph, embedder: &Embedder) -> Result<DimStats, CostError> {
    let embs: Vec<Vec<f64>> = g
        .vertex_ids()
        .map(|v| embedder.embed_vertex(g, v).expect("vertex exists").values)
        .collect();
    collect_stats(embs.iter().map(Vec::as_slice))
}

fn factors(q: &[f64], stats: &DimStats, divisor: Divisor, point_mass: bool) -> Result<Vec<f64>, CostError> {
    if q.len() != stats.mean.len() {
        return Err(CostError::DimensionMismatch(q.len(), stats.mean.len()));
    }
    q.iter()
        .enumerate()
        .map(|(j, &x)| {
            let var = stats.variance[j];
            let mu = stats.mean[j];
            if var == 0.0 {
                return if point_mass {
                    Ok(if mu >= x { 1.0 } else { 0.0 })
                } else {
                    Err(CostError::DegenerateVariance(j))
                };
            }
            let s = match divisor {
                Divisor::Variance => var,
                Divisor::StdDev => libm::sqrt(var),
            };
            Ok(phi((mu - x) / s))
        })
        .collect()
}

/// Estimated dominated-candidate count; fails on a zero-variance dimension.
pub fn estimate_cost(
    q: &[f64],
    stats: &DimStats,
    n_vertices: usize,
    divisor: Divisor,
) -> Result<CostEstimate, CostError> {
    let f = factors(q, stats, divisor, false)?;
    Ok(CostEstimate {
        estimate: n_vertices as f64 * f.iter().product::<f64>(),
        factors: f,
    })
}

/// As [`estimate_cost`], with a zero-variance dimension counted as a point
/// mass: factor 1 if `mu >= q`, else 0.
pub fn estimate_cost_point_mass(
    q: &[f64],
    stats: &DimStats,
    n_vertices: usize,
    divisor: Divisor,
) -> Result<CostEstimate, CostError> {
    let f = factors(q, stats, divisor, true)?;
    Ok(CostEstimate {
        estimate: n_vertices as f64 * f.iter().product::<f64>(),
        factors: f,
    })
}

/// 1-based ranks with ties sharing their average rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = alloc::vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation: Pearson correlation of the tie-averaged ranks.
/// `None` if a side is constant or the lengths differ.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some(sab / libm::sqrt(saa * sbb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn two_point_stats() {
        let s = collect_stats([&[0.0, 0.0][..], &[2.0, 2.0][..]]).unwrap();
        assert_eq!(s.mean, [1.0, 1.0]);
        assert_eq!(s.variance, [2.0, 2.0]);
        assert_eq!(collect_stats([&[1.0][..]]), Err(CostError::TooFewVertices(1)));
    }

    #[test]
    fn mean_query_halves_each_dimension() {
        let s = DimStats {
            mean: vec![0.3, 0.5, 0.7, 0.9],
            variance: vec![0.1, 0.2, 0.3, 0.4],
            count: 100,
        };
        let est = estimate_cost(&s.mean.clone(), &s, 1600, Divisor::Variance).unwrap();
        assert_eq!(est.factors, [0.5; 4]);
        assert_eq!(est.estimate, 100.0);
        let far = estimate_cost(&[1e9, 0.5, 0.7, 0.9], &s, 1600, Divisor::StdDev).unwrap();
        assert_eq!(far.estimate, 0.0);
    }

    #[test]
    fn zero_variance() {
        let s = DimStats {
            mean: vec![1.0, 1.0],
            variance: vec![0.0, 1.0],
            count: 2,
        };
        assert_eq!(
            estimate_cost(&[1.0, 1.0], &s, 10, Divisor::Variance),
            Err(CostError::DegenerateVariance(0))
        );
        let e = estimate_cost_point_mass(&[1.0, 1.0], &s, 10, Divisor::Variance).unwrap();
        assert_eq!(e.factors, [1.0, 0.5]);
        let e = estimate_cost_point_mass(&[1.5, 1.0], &s, 10, Divisor::Variance).unwrap();
        assert_eq!(e.estimate, 0.0);
    }

    #[test]
    fn phi_reference_values() {
        assert_eq!(phi(0.0), 0.5);
        assert!((phi(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((phi(-2.0) - 0.022_750_131_948_179_2).abs() < 1e-15);
    }

    #[test]
    fn spearman_known_values() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        // ranks (1.5, 1.5, 3) against (1, 2, 3)
        let r = spearman(&[5.0, 5.0, 7.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((r - 0.866_025_403_784_438_6).abs() < 1e-12);
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), None);
    }

    proptest! {
        #[test]
        fn phi_symmetry(x in -40.0f64..40.0) {
            prop_assert!((phi(x) + phi(-x) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn estimate_is_monotone_and_bounded(
            q in proptest::collection::vec(0.0f64..2.0, 4),
            bump in 0.0f64..1.0,
            j in 0usize..4,
        ) {
            let s = DimStats { mean: vec![0.4, 0.6, 1.0, 1.2], variance: vec![0.05, 0.1, 0.3, 0.2], count: 50 };
            for div in [Divisor::Variance, Divisor::StdDev] {
                let a = estimate_cost(&q, &s, 50, div).unwrap().estimate;
                let mut q2 = q.clone();
                q2[j] += bump;
                let b = estimate_cost(&q2, &s, 50, div).unwrap().estimate;
                prop_assert!(b <= a);
                prop_assert!((0.0..=50.0).contains(&a));
            }
        }
    }
}
