//! Per-vertex star state: SPAN vector and sorted neighbour SPUR lists.

use alloc::vec;
use alloc::vec::Vec;

use super::Das3Error;
use crate::embedding::{BaseVector, Embedder, SpanDirection, SpanVector, SpurVector};
use crate::graph::Label;

/// For each SPUR dimension, the neighbours' components in ascending order
/// together with their prefix sums.
#[derive(Clone, Debug, PartialEq)]
pub struct SortedSpurLists {
    lists: Vec<Vec<f64>>,
    /// `prefix[k][i]` = sum of the `i` smallest values of list `k`.
    prefix: Vec<Vec<f64>>,
}

impl SortedSpurLists {
    pub fn new(dim: usize) -> Self {
        Self {
            lists: vec![Vec::new(); dim],
            prefix: vec![vec![0.0]; dim],
        }
    }

    pub fn from_spurs<'a>(dim: usize, spurs: impl IntoIterator<Item = &'a SpurVector>) -> Self {
        let mut lists = vec![Vec::new(); dim];
        for x in spurs {
            for (list, &v) in lists.iter_mut().zip(&x.0) {
                list.push(v);
            }
        }
        for list in &mut lists {
            list.sort_by(f64::total_cmp);
        }
        let prefix = lists.iter().map(|l| prefix_sums(l)).collect();
        Self { lists, prefix }
    }

    /// Number of neighbours recorded.
    pub fn len(&self) -> usize {
        self.lists.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn list(&self, k: usize) -> &[f64] {
        &self.lists[k]
    }

    pub fn insert(&mut self, x: &SpurVector) {
        for (k, &v) in x.0.iter().enumerate() {
            let list = &mut self.lists[k];
            let at = list.partition_point(|&e| e < v);
            list.insert(at, v);
            self.prefix[k] = prefix_sums(list);
        }
    }

    /// Removes one occurrence of every component of `x`. Nothing changes if
    /// any component is missing.
    pub fn remove(&mut self, x: &SpurVector) -> Result<(), Das3Error> {
        let mut positions = Vec::with_capacity(x.0.len());
        for (k, &v) in x.0.iter().enumerate() {
            let list = &self.lists[k];
            let at = list.partition_point(|&e| e < v);
            if list.get(at) != Some(&v) {
                return Err(Das3Error::InconsistentState(
                    "neighbour SPUR value missing from sorted list",
                ));
            }
            positions.push(at);
        }
        for (k, at) in positions.into_iter().enumerate() {
            self.lists[k].remove(at);
            self.prefix[k] = prefix_sums(&self.lists[k]);
        }
        Ok(())
    }

    /// Sum of the `delta` smallest values on dimension `k`.
    pub fn low_sum(&self, k: usize, delta: usize) -> f64 {
        self.prefix[k][delta]
    }

    /// Sum of the `delta` largest values on dimension `k`.
    pub fn high_sum(&self, k: usize, delta: usize) -> f64 {
        let p = &self.prefix[k];
        let n = p.len() - 1;
        p[n] - p[n - delta]
    }
}

fn prefix_sums(list: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(list.len() + 1);
    let mut acc = 0.0;
    out.push(acc);
    for &v in list {
        acc += v;
        out.push(acc);
    }
    out
}

/// Axis-aligned bounding box of the embeddings of every `delta`-leaf
/// substructure of a star.
#[derive(Clone, Debug, PartialEq)]
pub struct Mbr {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl Mbr {
    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.low.len()
            && point
                .iter()
                .zip(self.low.iter().zip(&self.high))
                .all(|(p, (lo, hi))| lo <= p && p <= hi)
    }
}

/// Everything the synopses keep about one data vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct StarState {
    pub label: Label,
    pub spur: SpurVector,
    pub base: Option<BaseVector>,
    pub span: SpanVector,
    pub lists: SortedSpurLists,
}

impl StarState {
    pub fn new(embedder: &Embedder, label: Label) -> Self {
        let dim = embedder.dim();
        Self {
            label,
            spur: embedder.spur(label),
            base: embedder.mode().uses_base().then(|| embedder.base(label)),
            span: SpanVector::zeros(dim),
            lists: SortedSpurLists::new(dim),
        }
    }

    pub fn degree(&self) -> usize {
        self.lists.len()
    }

    pub(crate) fn add_span(&mut self, embedder: &Embedder, neighbor: Label) -> Result<(), Das3Error> {
        embedder
            .update_span(&mut self.span, neighbor, SpanDirection::Add)
            .map_err(Das3Error::Embedding)
    }

    pub(crate) fn remove_span(&mut self, embedder: &Embedder, neighbor: Label) -> Result<(), Das3Error> {
        embedder
            .update_span(&mut self.span, neighbor, SpanDirection::Remove)
            .map_err(Das3Error::Embedding)
    }

    /// Embedded value of raw coordinate `raw` on dimension `j`.
    #[inline]
    fn coord(&self, embedder: &Embedder, raw: f64, j: usize) -> f64 {
        match &self.base {
            Some(b) => embedder.embed_coord(raw, b, j),
            None => raw,
        }
    }

    /// Embedding of the full star.
    pub fn embedding(&self, embedder: &Embedder) -> Vec<f64> {
        let d = self.spur.0.len();
        (0..2 * d)
            .map(|j| {
                let raw = if j < d { self.spur.0[j] } else { self.span.0[j - d] };
                self.coord(embedder, raw, j)
            })
            .collect()
    }

    /// Upper corner dominating every `delta`-leaf substructure embedding.
    pub fn ub_corner(&self, embedder: &Embedder, delta: usize) -> Vec<f64> {
        let d = self.spur.0.len();
        (0..2 * d)
            .map(|j| {
                let raw = if j < d {
                    self.spur.0[j]
                } else {
                    self.lists.high_sum(j - d, delta)
                };
                self.coord(embedder, raw, j)
            })
            .collect()
    }

    /// Bounding box of the `delta`-leaf substructure embeddings.
    pub fn mbr(&self, embedder: &Embedder, delta: usize) -> Result<Mbr, Das3Error> {
        let deg = self.degree();
        if delta == 0 || delta > deg {
            return Err(Das3Error::DegreeOutOfRange { delta, degree: deg });
        }
        let d = self.spur.0.len();
        let mut low = Vec::with_capacity(2 * d);
        let mut high = Vec::with_capacity(2 * d);
        for j in 0..d {
            let v = self.coord(embedder, self.spur.0[j], j);
            low.push(v);
            high.push(v);
        }
        for k in 0..d {
            low.push(self.coord(embedder, self.lists.low_sum(k, delta), d + k));
            high.push(self.coord(embedder, self.lists.high_sum(k, delta), d + k));
        }
        Ok(Mbr { low, high })
    }

    /// `q ⪯ ub_corner(delta)` without materializing the corner.
    pub(crate) fn ub_dominates(&self, embedder: &Embedder, q: &[f64], delta: usize) -> bool {
        let d = self.spur.0.len();
        (0..d).all(|j| q[j] <= self.coord(embedder, self.spur.0[j], j))
            && (0..d).all(|k| q[d + k] <= self.coord(embedder, self.lists.high_sum(k, delta), d + k))
    }

    /// `q` lies in the MBR at `delta`; false when `delta` exceeds the degree.
    pub(crate) fn mbr_contains(&self, embedder: &Embedder, q: &[f64], delta: usize) -> bool {
        if delta == 0 || delta > self.degree() {
            return false;
        }
        let d = self.spur.0.len();
        (0..d).all(|j| q[j] == self.coord(embedder, self.spur.0[j], j))
            && (0..d).all(|k| {
                let lo = self.coord(embedder, self.lists.low_sum(k, delta), d + k);
                let hi = self.coord(embedder, self.lists.high_sum(k, delta), d + k);
                lo <= q[d + k] && q[d + k] <= hi
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spur(v: &[f64]) -> SpurVector {
        SpurVector(v.to_vec())
    }

    #[test]
    fn prefix_sums_track_inserts_and_removes() {
        let mut l = SortedSpurLists::new(2);
        l.insert(&spur(&[0.5, 0.25]));
        l.insert(&spur(&[0.125, 0.75]));
        l.insert(&spur(&[0.375, 0.5]));
        assert_eq!(l.list(0), &[0.125, 0.375, 0.5]);
        assert_eq!(l.low_sum(0, 2), 0.5);
        assert_eq!(l.high_sum(0, 2), 0.875);
        assert_eq!(l.high_sum(1, 3), 1.5);
        l.remove(&spur(&[0.375, 0.5])).unwrap();
        assert_eq!(l.list(1), &[0.25, 0.75]);
        assert!(l.remove(&spur(&[0.375, 0.5])).is_err());
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn from_spurs_equals_incremental() {
        let xs = [spur(&[0.5, 0.25]), spur(&[0.125, 0.75]), spur(&[0.5, 0.5])];
        let mut inc = SortedSpurLists::new(2);
        for x in &xs {
            inc.insert(x);
        }
        assert_eq!(SortedSpurLists::from_spurs(2, &xs), inc);
    }
}
