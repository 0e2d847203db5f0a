//! Stage timing without `std`.
//!
//! The engine reads time through [`Clock`]; the std side plugs in a
//! monotonic clock, tests and `no_std` users get [`NoClock`].

use core::ops::AddAssign;

pub trait Clock {
    /// Monotonic nanoseconds since an arbitrary origin.
    fn now_nanos(&self) -> u64;
}

/// A clock that never advances.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_nanos(&self) -> u64 {
        0
    }
}

/// Per-stage wall-clock breakdown of update processing, in nanoseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StageTimes {
    pub graph: u64,
    pub embedding: u64,
    pub synopsis: u64,
    pub filtering: u64,
    pub refinement: u64,
}

impl StageTimes {
    pub fn total(&self) -> u64 {
        self.graph + self.embedding + self.synopsis + self.filtering + self.refinement
    }
}

impl AddAssign for StageTimes {
    fn add_assign(&mut self, o: Self) {
        self.graph += o.graph;
        self.embedding += o.embedding;
        self.synopsis += o.synopsis;
        self.filtering += o.filtering;
        self.refinement += o.refinement;
    }
}
