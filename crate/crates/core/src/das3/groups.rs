//! Equi-frequency degree grouping.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// Degree intervals `(δ_{j-1}, δ_j]` with `δ_0 = 0` and `δ_m = ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeGroups {
    /// Finite upper bounds `δ_1 < … < δ_{m-1}`.
    bounds: Vec<usize>,
}

impl DegreeGroups {
    /// One group covering every degree.
    pub fn single() -> Self {
        Self { bounds: Vec::new() }
    }

    /// Groups from the finite bounds `δ_1..δ_{m-1}`, which must be strictly
    /// increasing and positive.
    pub fn from_bounds(bounds: Vec<usize>) -> Option<Self> {
        let ok = bounds.first().is_none_or(|&b| b > 0) && bounds.windows(2).all(|w| w[0] < w[1]);
        ok.then_some(Self { bounds })
    }

    pub fn len(&self) -> usize {
        self.bounds.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    /// `δ_{j-1}`.
    pub fn lower(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.bounds[j - 1]
        }
    }

    /// `δ_j`, `None` for the unbounded last group.
    pub fn upper(&self, j: usize) -> Option<usize> {
        self.bounds.get(j).copied()
    }

    /// Group whose interval contains `degree` (degree 0 maps to group 0).
    pub fn group_of(&self, degree: usize) -> usize {
        self.bounds.partition_point(|&b| b < degree)
    }

    /// Whether a vertex of this degree has an entry in synopsis `j`.
    pub fn has_entry(&self, j: usize, degree: usize) -> bool {
        degree > self.lower(j)
    }

    /// `ub_δ = min(deg, δ_j)`.
    pub fn cap(&self, j: usize, degree: usize) -> usize {
        self.upper(j).map_or(degree, |u| degree.min(u))
    }
}

/// Splits the positive degrees into at most `m` contiguous buckets of
/// near-equal vertex count.
///
/// The split minimizes the largest bucket mass, and among those splits
/// maximizes the smallest. With fewer distinct degrees than `m` every
/// distinct degree gets its own bucket.
pub fn compute_degree_groups(degrees: impl IntoIterator<Item = usize>, m: usize) -> DegreeGroups {
    assert!(m >= 1, "at least one degree group");
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for d in degrees.into_iter().filter(|&d| d > 0) {
        *freq.entry(d).or_default() += 1;
    }
    let values: Vec<usize> = freq.keys().copied().collect();
    let masses: Vec<usize> = freq.values().copied().collect();
    let k = values.len();
    if k <= 1 || m == 1 {
        return DegreeGroups::single();
    }
    if k <= m {
        return DegreeGroups {
            bounds: values[..k - 1].to_vec(),
        };
    }
    let cuts = balanced_cuts(&masses, m);
    DegreeGroups {
        bounds: cuts.iter().map(|&c| values[c - 1]).collect(),
    }
}

/// Cut positions (exclusive prefix lengths) of an `m`-way contiguous split
/// of `masses`, lexicographically optimal for (min max, max min).
fn balanced_cuts(masses: &[usize], m: usize) -> Vec<usize> {
    let k = masses.len();
    let mut prefix = vec![0usize; k + 1];
    for (i, &w) in masses.iter().enumerate() {
        prefix[i + 1] = prefix[i] + w;
    }
    let sum = |a: usize, b: usize| prefix[b] - prefix[a];

    // best_max[g][i]: smallest achievable max over splits of the first i
    // items into g non-empty buckets.
    const INF: usize = usize::MAX;
    let mut best_max = vec![vec![INF; k + 1]; m + 1];
    best_max[0][0] = 0;
    for g in 1..=m {
        for i in g..=k {
            best_max[g][i] = (g - 1..i)
                .filter(|&j| best_max[g - 1][j] != INF)
                .map(|j| best_max[g - 1][j].max(sum(j, i)))
                .min()
                .unwrap_or(INF);
        }
    }
    let cap = best_max[m][k];

    // Among splits with every bucket <= cap, maximize the smallest bucket.
    let mut best_min = vec![vec![None::<usize>; k + 1]; m + 1];
    let mut choice = vec![vec![0usize; k + 1]; m + 1];
    best_min[0][0] = Some(usize::MAX);
    for g in 1..=m {
        for i in g..=k {
            for j in g - 1..i {
                let s = sum(j, i);
                if s > cap {
                    continue;
                }
                if let Some(prev) = best_min[g - 1][j] {
                    let cand = prev.min(s);
                    if best_min[g][i].is_none_or(|b| cand > b) {
                        best_min[g][i] = Some(cand);
                        choice[g][i] = j;
                    }
                }
            }
        }
    }
    let mut cuts = Vec::with_capacity(m - 1);
    let mut i = k;
    for g in (1..=m).rev() {
        let j = choice[g][i];
        if g > 1 {
            cuts.push(j);
        }
        i = j;
    }
    cuts.reverse();
    cuts
}

/// Vertex count per group for the given degrees (degree 0 excluded).
pub fn group_masses(groups: &DegreeGroups, degrees: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0; groups.len()];
    for d in degrees.into_iter().filter(|&d| d > 0) {
        out[groups.group_of(d)] += 1;
    }
    out
}
