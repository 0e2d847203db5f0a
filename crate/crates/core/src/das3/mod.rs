//! Degree-aware star substructure synopses.
//!
//! Data vertices are split into degree groups. Group `j` keeps, for every
//! vertex with degree above `δ_{j-1}`, an upper corner that dominates the
//! embedding of every substructure with `min(deg, δ_j)` leaves, placed in a
//! uniform grid. A query vertex probes the synopsis of its own degree group:
//! cells are visited by descending key down to the key of the query's own
//! cell, and entries pass through UB dominance, label equality and the MBR
//! at the query degree.

pub mod grid;
pub mod groups;
pub mod star;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::embedding::{Embedder, EmbeddingError};
use crate::graph::{DynamicGraph, Label, UpdateEffect, UpdateKind, VertexId};

pub use grid::{Cell, CellId, GridSpec, GridSynopsis, VertexEntry};
pub use groups::{compute_degree_groups, group_masses, DegreeGroups};
pub use star::{Mbr, SortedSpurLists, StarState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Das3Error {
    #[error("substructure degree {delta} outside 1..={degree}")]
    DegreeOutOfRange { delta: usize, degree: usize },
    #[error("synopsis state is inconsistent: {0}")]
    InconsistentState(&'static str),
    #[error(transparent)]
    Embedding(EmbeddingError),
}

/// What a query vertex looks like to the filters.
#[derive(Clone, Copy, Debug)]
pub struct Probe<'a> {
    pub embedding: &'a [f64],
    pub degree: usize,
    pub label: Label,
}

/// Counters of one synopsis scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanStats {
    /// Non-empty cells in the synopsis.
    pub cells_total: usize,
    /// Cells visited before the key cutoff.
    pub cells_scanned: usize,
    /// Visited cells that dominate the query's cell.
    pub cells_dominating: usize,
    /// Entries in visited cells.
    pub examined: usize,
    pub passed_ub: usize,
    pub passed_label: usize,
    /// Entries that also passed the MBR check: the candidates.
    pub survivors: usize,
}

impl ScanStats {
    /// `1 - survivors / examined`; 1 when nothing was examined.
    pub fn pruning_power(&self) -> f64 {
        if self.examined == 0 {
            1.0
        } else {
            1.0 - self.survivors as f64 / self.examined as f64
        }
    }
}

impl core::ops::AddAssign for ScanStats {
    fn add_assign(&mut self, o: Self) {
        self.cells_total += o.cells_total;
        self.cells_scanned += o.cells_scanned;
        self.cells_dominating += o.cells_dominating;
        self.examined += o.examined;
        self.passed_ub += o.passed_ub;
        self.passed_label += o.passed_label;
        self.survivors += o.survivors;
    }
}

/// Grid cells moved by one maintenance step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaintenanceReport {
    pub relocated: usize,
    pub inserted: usize,
    pub removed: usize,
}

/// All per-group synopses of one data graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Synopses {
    groups: DegreeGroups,
    grids: Vec<GridSynopsis>,
    stars: BTreeMap<VertexId, StarState>,
    mbr_filter: bool,
}

/// Largest SPAN component over the graph.
pub fn span_max(g: &DynamicGraph, embedder: &Embedder) -> f64 {
    g.vertex_ids()
        .filter_map(|v| embedder.span(g, v).ok())
        .flat_map(|y| y.0)
        .fold(0.0, f64::max)
}

impl Synopses {
    /// Builds star state and every group synopsis from scratch.
    pub fn build(g: &DynamicGraph, groups: DegreeGroups, spec: GridSpec, embedder: &Embedder) -> Self {
        let mut stars = BTreeMap::new();
        let mut spurs: BTreeMap<Label, crate::embedding::SpurVector> = BTreeMap::new();
        for (_, l) in g.vertices() {
            spurs.entry(l).or_insert_with(|| embedder.spur(l));
        }
        for (v, l) in g.vertices() {
            let mut s = StarState::new(embedder, l);
            let nbr_labels = g
                .neighbors(v)
                .iter()
                .map(|&n| g.label(n).expect("neighbour registered"));
            let xs: Vec<_> = nbr_labels.map(|nl| &spurs[&nl]).collect();
            for x in &xs {
                for (acc, c) in s.span.0.iter_mut().zip(&x.0) {
                    *acc += c;
                }
            }
            s.lists = SortedSpurLists::from_spurs(embedder.dim(), xs.iter().copied());
            stars.insert(v, s);
        }
        let grids = (0..groups.len()).map(|_| GridSynopsis::new(spec.clone())).collect();
        let mut out = Self {
            groups,
            grids,
            stars,
            mbr_filter: true,
        };
        let ids: Vec<VertexId> = out.stars.keys().copied().collect();
        for v in ids {
            out.place(v, embedder);
        }
        out
    }

    pub fn groups(&self) -> &DegreeGroups {
        &self.groups
    }

    pub fn grids(&self) -> &[GridSynopsis] {
        &self.grids
    }

    pub fn grid(&self, j: usize) -> &GridSynopsis {
        &self.grids[j]
    }

    pub fn spec(&self) -> &GridSpec {
        self.grids[0].spec()
    }

    pub fn star(&self, v: VertexId) -> Option<&StarState> {
        self.stars.get(&v)
    }

    pub fn stars(&self) -> impl Iterator<Item = (VertexId, &StarState)> {
        self.stars.iter().map(|(&v, s)| (v, s))
    }

    #[doc(hidden)]
    pub fn set_mbr_filter(&mut self, on: bool) {
        self.mbr_filter = on;
    }

    /// MBR of the `delta`-leaf substructures of `v`.
    pub fn mbr_for_degree(&self, v: VertexId, delta: usize, embedder: &Embedder) -> Result<Mbr, Das3Error> {
        self.stars
            .get(&v)
            .ok_or(Das3Error::InconsistentState("unknown vertex"))?
            .mbr(embedder, delta)
    }

    /// Syncs `v`'s entries in every group with its current star.
    fn place(&mut self, v: VertexId, embedder: &Embedder) -> MaintenanceReport {
        let mut report = MaintenanceReport::default();
        let star = &self.stars[&v];
        let deg = star.degree();
        for (j, grid) in self.grids.iter_mut().enumerate() {
            if self.groups.has_entry(j, deg) {
                let cap = self.groups.cap(j, deg);
                let existed = grid.entry(v).is_some();
                if grid.upsert(v, cap, star.ub_corner(embedder, cap)) {
                    if existed {
                        report.relocated += 1;
                    } else {
                        report.inserted += 1;
                    }
                }
            } else if grid.remove(v).is_some() {
                report.removed += 1;
            }
        }
        report
    }

    /// Updates SPAN vectors for an applied update.
    pub fn update_embeddings(&mut self, effect: &UpdateEffect, embedder: &Embedder) -> Result<(), Das3Error> {
        for c in &effect.endpoints {
            self.stars
                .entry(c.vertex)
                .or_insert_with(|| StarState::new(embedder, c.label));
        }
        for (i, c) in effect.endpoints.iter().enumerate() {
            let other = effect.endpoints[1 - i].label;
            let star = self.stars.get_mut(&c.vertex).expect("inserted above");
            match effect.kind {
                UpdateKind::Insert => star.add_span(embedder, other)?,
                UpdateKind::Delete => star.remove_span(embedder, other)?,
            }
        }
        Ok(())
    }

    /// Updates sorted lists and grid entries for an applied update.
    pub fn update_synopses(
        &mut self,
        effect: &UpdateEffect,
        embedder: &Embedder,
    ) -> Result<MaintenanceReport, Das3Error> {
        for (i, c) in effect.endpoints.iter().enumerate() {
            let other = self.stars[&effect.endpoints[1 - i].vertex].spur.clone();
            let star = self
                .stars
                .get_mut(&c.vertex)
                .ok_or(Das3Error::InconsistentState("endpoint has no star state"))?;
            match effect.kind {
                UpdateKind::Insert => star.lists.insert(&other),
                UpdateKind::Delete => star.lists.remove(&other)?,
            }
            if star.degree() != c.new_degree {
                return Err(Das3Error::InconsistentState("star degree disagrees with graph"));
            }
            for (j, grid) in self.grids.iter().enumerate() {
                if self.groups.has_entry(j, c.old_degree) && grid.entry(c.vertex).is_none() {
                    return Err(Das3Error::InconsistentState("expected synopsis entry is missing"));
                }
            }
        }
        let mut report = MaintenanceReport::default();
        for c in &effect.endpoints {
            let r = self.place(c.vertex, embedder);
            report.relocated += r.relocated;
            report.inserted += r.inserted;
            report.removed += r.removed;
        }
        Ok(report)
    }

    /// Both maintenance steps.
    pub fn maintain(&mut self, effect: &UpdateEffect, embedder: &Embedder) -> Result<MaintenanceReport, Das3Error> {
        self.update_embeddings(effect, embedder)?;
        self.update_synopses(effect, embedder)
    }

    /// Candidates for a query vertex from its degree group's synopsis, in
    /// ascending vertex order.
    pub fn scan_candidates(&self, probe: Probe<'_>, embedder: &Embedder) -> (Vec<VertexId>, ScanStats) {
        let j = self.groups.group_of(probe.degree);
        let grid = &self.grids[j];
        let spec = grid.spec();
        let q_coords = spec.coords_of(probe.embedding);
        let cutoff = crate::embedding::key(&spec.cell_upper(&q_coords));
        let mut stats = ScanStats {
            cells_total: grid.cell_count(),
            ..ScanStats::default()
        };
        let mut out = Vec::new();
        for (_, cell) in grid.cells_by_key_desc() {
            if cell.key < cutoff {
                break;
            }
            stats.cells_scanned += 1;
            stats.examined += cell.members.len();
            if !cell.coords.iter().zip(&q_coords).all(|(c, q)| q <= c) {
                continue;
            }
            stats.cells_dominating += 1;
            for &v in &cell.members {
                let entry = grid.entry(v).expect("cell member has an entry");
                if !crate::embedding::dominated(probe.embedding, &entry.ub_corner) {
                    continue;
                }
                stats.passed_ub += 1;
                let star = &self.stars[&v];
                if star.label != probe.label {
                    continue;
                }
                stats.passed_label += 1;
                if self.mbr_filter && !star.mbr_contains(embedder, probe.embedding, probe.degree) {
                    continue;
                }
                stats.survivors += 1;
                out.push(v);
            }
        }
        out.sort_unstable();
        (out, stats)
    }

    /// Whether `v` would survive the scan for `probe` on the current state.
    pub fn admits(&self, probe: Probe<'_>, v: VertexId, embedder: &Embedder) -> bool {
        let Some(star) = self.stars.get(&v) else {
            return false;
        };
        let j = self.groups.group_of(probe.degree);
        let deg = star.degree();
        if !self.groups.has_entry(j, deg) || star.label != probe.label {
            return false;
        }
        star.ub_dominates(embedder, probe.embedding, self.groups.cap(j, deg))
            && (!self.mbr_filter || star.mbr_contains(embedder, probe.embedding, probe.degree))
    }

    pub fn check_invariants(&self) -> bool {
        self.grids.iter().all(GridSynopsis::check_invariants)
            && self.stars.iter().all(|(&v, s)| {
                let deg = s.degree();
                self.grids
                    .iter()
                    .enumerate()
                    .all(|(j, g)| g.entry(v).is_some() == self.groups.has_entry(j, deg))
            })
    }
}
