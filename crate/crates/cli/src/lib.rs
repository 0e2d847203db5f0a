//! File formats, synthetic data generation and benchmark harness around
//! `dsm-core`, plus the `dsm` command line.

pub mod bench;
pub mod config;
pub mod formats;
pub mod generate;
