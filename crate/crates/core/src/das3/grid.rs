//! Uniform grids over embedding space with cells ordered by key.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::embedding::{key, EmbeddingConfig, EmbeddingMode};
use crate::graph::VertexId;

/// Headroom on the per-dimension domain.
pub const DOMAIN_SLACK: f64 = 0.01;

/// Partition of `[0, upper[j]]` into `cells_per_dim` equal intervals on every
/// dimension. Values beyond the domain fall into the last interval.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    cells_per_dim: usize,
    upper: Vec<f64>,
}

impl GridSpec {
    /// Panics unless `cells_per_dim >= 1`, every bound is positive and the
    /// packed cell id fits in 64 bits.
    pub fn new(cells_per_dim: usize, upper: Vec<f64>) -> Self {
        assert!(cells_per_dim >= 1, "need at least one cell per dimension");
        assert!(upper.iter().all(|&u| u > 0.0), "domain bounds must be positive");
        let bits = (usize::BITS - (cells_per_dim - 1).leading_zeros()) as usize * upper.len();
        assert!(bits <= 64, "cell ids do not fit in 64 bits");
        Self { cells_per_dim, upper }
    }

    /// Domain for a configuration: SPUR dimensions reach `alpha + beta(1+eps)`
    /// and SPAN dimensions `alpha * span_max + beta(1+eps)`.
    pub fn for_config(cfg: &EmbeddingConfig, cells_per_dim: usize, span_max: f64) -> Self {
        let (alpha, beta) = match cfg.mode {
            EmbeddingMode::Plain => (1.0, 0.0),
            _ => (cfg.alpha, cfg.beta),
        };
        let span_max = span_max.max(1.0);
        let head = beta * (1.0 + DOMAIN_SLACK);
        let mut upper = Vec::with_capacity(2 * cfg.dim);
        upper.extend((0..cfg.dim).map(|_| alpha * (1.0 + DOMAIN_SLACK) + head));
        upper.extend((0..cfg.dim).map(|_| alpha * span_max * (1.0 + DOMAIN_SLACK) + head));
        Self::new(cells_per_dim, upper)
    }

    pub fn cells_per_dim(&self) -> usize {
        self.cells_per_dim
    }

    pub fn dims(&self) -> usize {
        self.upper.len()
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Interval index of value `v` on dimension `j`; monotone in `v`.
    pub fn coord(&self, j: usize, v: f64) -> u16 {
        let k = self.cells_per_dim;
        let c = libm::floor(v * k as f64 / self.upper[j]);
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(k - 1) as u16
        }
    }

    pub fn coords_of(&self, point: &[f64]) -> Vec<u16> {
        point.iter().enumerate().map(|(j, &v)| self.coord(j, v)).collect()
    }

    /// Packs coordinates into a mixed-radix id; the first dimension is the
    /// most significant digit.
    pub fn pack(&self, coords: &[u16]) -> CellId {
        let k = self.cells_per_dim as u64;
        CellId(coords.iter().fold(0u64, |acc, &c| acc * k + u64::from(c)))
    }

    pub fn unpack(&self, id: CellId) -> Vec<u16> {
        let k = self.cells_per_dim as u64;
        let mut rest = id.0;
        let mut out = alloc::vec![0u16; self.dims()];
        for slot in out.iter_mut().rev() {
            *slot = (rest % k) as u16;
            rest /= k;
        }
        out
    }

    /// Upper corner of the cell with these coordinates.
    pub fn cell_upper(&self, coords: &[u16]) -> Vec<f64> {
        let k = self.cells_per_dim as f64;
        coords
            .iter()
            .zip(&self.upper)
            .map(|(&c, &u)| (f64::from(c) + 1.0) * u / k)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub u64);

/// A non-empty grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub coords: Vec<u16>,
    pub upper: Vec<f64>,
    pub key: f64,
    pub members: BTreeSet<VertexId>,
}

/// One vertex's entry in a group synopsis.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexEntry {
    /// Capped degree `min(deg, δ_j)` the corner was built for.
    pub ub_degree: usize,
    pub ub_corner: Vec<f64>,
    pub cell: CellId,
}

/// Grid synopsis of one degree group.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSynopsis {
    spec: GridSpec,
    cells: BTreeMap<CellId, Cell>,
    /// `(key bits, cell)`; keys are non-negative so bit order is value order.
    order: BTreeSet<(u64, CellId)>,
    entries: BTreeMap<VertexId, VertexEntry>,
}

impl GridSynopsis {
    pub fn new(spec: GridSpec) -> Self {
        Self {
            spec,
            cells: BTreeMap::new(),
            order: BTreeSet::new(),
            entries: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn entry(&self, v: VertexId) -> Option<&VertexEntry> {
        self.entries.get(&v)
    }

    pub fn entries(&self) -> impl Iterator<Item = (VertexId, &VertexEntry)> {
        self.entries.iter().map(|(&v, e)| (v, e))
    }

    pub fn cell(&self, id: CellId) -> Option<&Cell> {
        self.cells.get(&id)
    }

    /// Non-empty cells by descending key (ties by descending id).
    pub fn cells_by_key_desc(&self) -> impl Iterator<Item = (CellId, &Cell)> {
        self.order.iter().rev().map(|(_, id)| (*id, &self.cells[id]))
    }

    /// Inserts or moves `v`'s entry. Returns whether the cell changed.
    pub fn upsert(&mut self, v: VertexId, ub_degree: usize, ub_corner: Vec<f64>) -> bool {
        let coords = self.spec.coords_of(&ub_corner);
        let cell = self.spec.pack(&coords);
        let moved = match self.entries.get(&v) {
            Some(old) if old.cell == cell => false,
            Some(old) => {
                let old_cell = old.cell;
                self.detach(v, old_cell);
                true
            }
            None => true,
        };
        if moved {
            let spec = &self.spec;
            let slot = self.cells.entry(cell).or_insert_with(|| {
                let upper = spec.cell_upper(&coords);
                Cell {
                    key: key(&upper),
                    upper,
                    coords,
                    members: BTreeSet::new(),
                }
            });
            if slot.members.is_empty() {
                self.order.insert((slot.key.to_bits(), cell));
            }
            slot.members.insert(v);
        }
        self.entries.insert(
            v,
            VertexEntry {
                ub_degree,
                ub_corner,
                cell,
            },
        );
        moved
    }

    pub fn remove(&mut self, v: VertexId) -> Option<VertexEntry> {
        let entry = self.entries.remove(&v)?;
        self.detach(v, entry.cell);
        Some(entry)
    }

    fn detach(&mut self, v: VertexId, id: CellId) {
        if let Some(cell) = self.cells.get_mut(&id) {
            cell.members.remove(&v);
            if cell.members.is_empty() {
                self.order.remove(&(cell.key.to_bits(), id));
                self.cells.remove(&id);
            }
        }
    }

    /// Cells, ordering and entries agree with each other.
    pub fn check_invariants(&self) -> bool {
        let members: usize = self.cells.values().map(|c| c.members.len()).sum();
        members == self.entries.len()
            && self.order.len() == self.cells.len()
            && self.entries.iter().all(|(v, e)| {
                self.cells.get(&e.cell).is_some_and(|c| c.members.contains(v))
                    && self.spec.pack(&self.spec.coords_of(&e.ub_corner)) == e.cell
            })
            && self
                .order
                .iter()
                .all(|(bits, id)| self.cells.get(id).is_some_and(|c| c.key.to_bits() == *bits))
    }
}

/// One line per non-empty cell: `cell <c0,c1,..> key=<k> entries=<n>`.
impl fmt::Display for GridSynopsis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (_, cell) in self.cells_by_key_desc() {
            f.write_str("cell ")?;
            for (i, c) in cell.coords.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            writeln!(f, " key={} entries={}", cell.key, cell.members.len())?;
        }
        Ok(())
    }
}
