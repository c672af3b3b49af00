//! The solver loop: configuration, stopping rules, results and the catalog.

mod catalog;
mod engine;
mod exec;
mod local;

use alloc::string::String;
use alloc::vec::Vec;

pub use catalog::{
    strategy, uses_epsilon, Family, Handler, Hybrid, Partitioning, Selector, Strategy, ALGORITHMS,
};
pub use engine::solve_with;
pub use exec::{Clock, Executor, NoClock, ParallelPlan, Sequential};
pub use local::{inequality_values, local_search, minimize, LocalPoint, LocalResult};

use crate::constraints::{HiddenConfig, EPS_PHI};
use crate::error::Result;
use crate::partition::StorageKind;
use crate::problem::ProblemSpec;

/// Evaluation count recorded for runs that miss the target.
pub const FAILURE_SENTINEL: usize = 2_000_000;
/// Default target percent error.
pub const DEFAULT_EPS_PE: f64 = 1e-2;

/// Parameters of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Catalog id.
    pub algorithm: String,
    /// Overrides the catalog epsilon of hull-based selectors.
    pub epsilon: Option<f64>,
    /// Stop once the percent error to the known optimum is at most this.
    pub eps_pe: f64,
    pub max_evals: usize,
    /// Wall-clock limit in seconds.
    pub max_time: Option<f64>,
    pub max_iters: Option<usize>,
    /// Worker count requested from the executor.
    pub workers: usize,
    pub storage: StorageKind,
    pub hidden: HiddenConfig,
    /// Feasibility tolerance on the violation sum.
    pub eps_phi: f64,
}

impl RunConfig {
    pub fn new(algorithm: impl Into<String>) -> Self {
        RunConfig {
            algorithm: algorithm.into(),
            epsilon: None,
            eps_pe: DEFAULT_EPS_PE,
            max_evals: FAILURE_SENTINEL,
            max_time: None,
            max_iters: None,
            workers: 1,
            storage: StorageKind::default(),
            hidden: HiddenConfig::default(),
            eps_phi: EPS_PHI,
        }
    }

    pub fn with_max_evals(mut self, n: usize) -> Self {
        self.max_evals = n;
        self
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = Some(n);
        self
    }

    pub fn with_epsilon(mut self, eps: f64) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn with_storage(mut self, storage: StorageKind) -> Self {
        self.storage = storage;
        self
    }
}

/// Why a run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// The percent-error target was met.
    Solved,
    BudgetExceeded,
    TimeExceeded,
    IterCapped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Solved => "solved",
            Status::BudgetExceeded => "budget",
            Status::TimeExceeded => "time",
            Status::IterCapped => "iterations",
        }
    }
}

/// State after one iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub evals: usize,
    /// Best feasible value so far (`f64::INFINITY` before the first one).
    pub f_min: f64,
    pub elapsed: f64,
}

/// Outcome of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    /// Best feasible value found (`f64::INFINITY` when none was found).
    pub f_min: f64,
    /// Where `f_min` was found, in original coordinates. Without a feasible
    /// point this is the representative of the best-ranked element.
    pub x_min: Vec<f64>,
    pub evals: usize,
    pub iters: usize,
    pub elapsed: f64,
    pub status: Status,
    pub trace: Vec<TraceRecord>,
}

impl RunResult {
    /// Evaluations to solve, or the failure sentinel.
    pub fn cost(&self) -> usize {
        if self.status == Status::Solved {
            self.evals
        } else {
            FAILURE_SENTINEL
        }
    }
}

/// `100 (f - f*) / |f*|`, or `100 f` when `f* = 0`.
pub fn percent_error(f: f64, fstar: f64) -> f64 {
    if fstar == 0.0 {
        100.0 * f
    } else {
        100.0 * (f - fstar) / libm::fabs(fstar)
    }
}

/// Whether `f` meets the percent-error target against `fstar`.
pub fn should_stop(f: f64, fstar: f64, eps_pe: f64) -> bool {
    f.is_finite() && percent_error(f, fstar) <= eps_pe
}

/// Runs `cfg.algorithm` on `spec` on the calling thread without a clock.
pub fn solve(spec: &ProblemSpec, cfg: &RunConfig) -> Result<RunResult> {
    solve_with(spec, cfg, &Sequential, &NoClock)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_error_cases() {
        assert_eq!(percent_error(0.005, 0.0), 0.5);
        assert!((percent_error(-0.99, -1.0) - 1.0).abs() < 1e-12);
        assert!(should_stop(1e-4, 0.0, 1e-2));
        assert!(!should_stop(f64::INFINITY, 0.0, 1e-2));
        assert!(!should_stop(2.0, 1.0, 1e-2));
    }

    #[test]
    fn failed_runs_cost_the_sentinel() {
        let r = RunResult {
            f_min: 1.0,
            x_min: Vec::new(),
            evals: 17,
            iters: 1,
            elapsed: 0.0,
            status: Status::BudgetExceeded,
            trace: Vec::new(),
        };
        assert_eq!(r.cost(), FAILURE_SENTINEL);
        assert_eq!(
            RunResult {
                status: Status::Solved,
                ..r
            }
            .cost(),
            17
        );
    }
}
