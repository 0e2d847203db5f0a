//! Seeded Zipf draws through an equal-mass bucket mapping.
//!
//! Both the uniform distribution on `(0, 1]` and the discrete Zipf(s, N)
//! rank distribution are cut into `b` buckets of mass `1/b`. A uniform draw
//! `u` selects bucket `i`; the rank is then placed inside Zipf bucket `i` at
//! the same relative mass position, which is the inverse CDF evaluated at `u`
//! restricted to that bucket's rank range. The bucket table only narrows the
//! search: the result does not depend on `b`.

use alloc::vec::Vec;

use super::mixer;

#[derive(Clone, Debug, PartialEq)]
pub struct ZipfTable {
    ranks: u32,
    /// `cdf[r - 1] = P(rank <= r)`; the last entry is exactly 1.
    cdf: Vec<f64>,
    /// `starts[i]` = smallest rank index whose cdf reaches `i / b`;
    /// `starts[b] = ranks - 1`.
    starts: Vec<usize>,
}

impl ZipfTable {
    /// Panics unless `ranks >= buckets >= 1` and `exponent >= 0`.
    pub fn new(exponent: f64, ranks: u32, buckets: u32) -> Self {
        assert!(buckets >= 1 && ranks >= buckets, "need ranks >= buckets >= 1");
        assert!(exponent >= 0.0, "negative Zipf exponent");
        let weights: Vec<f64> = (1..=ranks).map(|r| libm::pow(f64::from(r), -exponent)).collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc / total
            })
            .collect();
        *cdf.last_mut().expect("ranks >= 1") = 1.0;
        let b = buckets as usize;
        let mut starts: Vec<usize> = (0..b)
            .map(|i| {
                let q = i as f64 / b as f64;
                cdf.partition_point(|&c| c < q)
            })
            .collect();
        starts.push(ranks as usize - 1);
        Self { ranks, cdf, starts }
    }

    pub fn ranks(&self) -> u32 {
        self.ranks
    }

    pub fn buckets(&self) -> usize {
        self.starts.len() - 1
    }

    /// Rank in `1..=N` at quantile `u in (0, 1]`, searched inside the bucket
    /// that `u` falls into.
    pub fn rank_at(&self, u: f64) -> u32 {
        let b = self.buckets();
        let i = ((libm::ceil(u * b as f64) as usize).max(1) - 1).min(b - 1);
        let (lo, hi) = (self.starts[i], self.starts[i + 1]);
        let slice = &self.cdf[lo..=hi];
        let idx = lo + slice.partition_point(|&c| c < u);
        let exact = idx <= hi && (idx == 0 || self.cdf[idx - 1] < u);
        if exact {
            idx as u32 + 1
        } else {
            // u sat on a bucket edge that rounded the other way
            self.inverse_cdf_scan(u) as u32
        }
    }

    /// Plain inverse-CDF over the whole table.
    pub fn inverse_cdf_scan(&self, u: f64) -> usize {
        self.cdf.partition_point(|&c| c < u) + 1
    }

    /// Normalized rank `r / N` in `(0, 1]` for a 64-bit seed.
    pub fn draw(&self, seed: u64) -> f64 {
        let u = mixer::unit(seed);
        f64::from(self.rank_at(u)) / f64::from(self.ranks)
    }

    /// Same draw as [`draw`](Self::draw), rounded up onto the `2^-24` grid
    /// so that sums of draws stay exact.
    pub fn draw_ticks(&self, seed: u64) -> u64 {
        let u = mixer::unit(seed);
        let r = u64::from(self.rank_at(u));
        let n = u64::from(self.ranks);
        (r << mixer::UNIT_BITS).div_ceil(n)
    }
}
