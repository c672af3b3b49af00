//! Work splitting and the execution interface used by the solver loop.

use alloc::vec::Vec;
use core::ops::Range;

use crate::error::Result;

/// Wall-clock source in seconds since the start of a run.
pub trait Clock {
    fn elapsed(&self) -> f64;
}

/// A clock that never advances, for environments without a timer.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> f64 {
        0.0
    }
}

/// Contiguous shares of `0..len`, one per worker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelPlan {
    pub shares: Vec<Range<usize>>,
}

impl ParallelPlan {
    /// Splits `len` items over `workers` shares whose sizes differ by at most
    /// one, larger shares first. Empty shares are dropped.
    pub fn balanced(len: usize, workers: usize) -> Self {
        let workers = workers.max(1);
        let base = len / workers;
        let extra = len % workers;
        let mut shares = Vec::with_capacity(workers);
        let mut start = 0;
        for w in 0..workers {
            let size = base + usize::from(w < extra);
            if size == 0 {
                break;
            }
            shares.push(start..start + size);
            start += size;
        }
        ParallelPlan { shares }
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }
}

/// Runs a job on every share of a plan and returns the results in share order.
pub trait Executor {
    /// Number of workers the executor runs at once.
    fn workers(&self) -> usize;

    fn execute<T: Send>(
        &self,
        plan: &ParallelPlan,
        job: &(dyn Fn(Range<usize>) -> T + Sync),
    ) -> Result<Vec<T>>;
}

/// Runs every share on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn workers(&self) -> usize {
        1
    }

    fn execute<T: Send>(
        &self,
        plan: &ParallelPlan,
        job: &(dyn Fn(Range<usize>) -> T + Sync),
    ) -> Result<Vec<T>> {
        Ok(plan.shares.iter().map(|r| job(r.clone())).collect())
    }
}
