//! Benchmark harness: suites, cost matrices, performance profiles and files.

pub mod emit;
pub mod profile;
pub mod suite;

pub use profile::{log_grid, perf_profile, CostMatrix, ProfileData};
pub use suite::{aggregate, cost_matrix, run_suite, Metric, RunRecord, Stats, SuiteRun, Summary};
