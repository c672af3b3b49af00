//! Thread-backed execution and a monotonic clock for the solver loop.

use std::any::Any;
use std::ops::Range;
use std::time::Instant;

use divrect_core::problem::ProblemSpec;
use divrect_core::solve::{solve_with, Clock, Executor, ParallelPlan, RunConfig, RunResult};
use divrect_core::Error as CoreError;

/// Environment variable that overrides the default worker count.
pub const WORKERS_ENV: &str = "DIVRECT_WORKERS";

/// Worker count from [`WORKERS_ENV`], or 1 when unset or malformed.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k >= 1)
        .unwrap_or(1)
}

/// Runs each share of a plan on its own scoped thread.
///
/// Results come back in share order, so the solver sees the same sequence
/// of values whatever the worker count.
#[derive(Clone, Copy, Debug)]
pub struct ThreadExecutor {
    workers: usize,
}

impl ThreadExecutor {
    pub fn new(workers: usize) -> Self {
        ThreadExecutor {
            workers: workers.max(1),
        }
    }
}

impl Executor for ThreadExecutor {
    fn workers(&self) -> usize {
        self.workers
    }

    fn execute<T: Send>(
        &self,
        plan: &ParallelPlan,
        job: &(dyn Fn(Range<usize>) -> T + Sync),
    ) -> divrect_core::Result<Vec<T>> {
        if plan.len() <= 1 {
            return Ok(plan.shares.iter().map(|r| job(r.clone())).collect());
        }
        std::thread::scope(|s| {
            let handles: Vec<_> = plan
                .shares
                .iter()
                .map(|r| {
                    let r = r.clone();
                    s.spawn(move || job(r))
                })
                .collect();
            handles
                .into_iter()
                .enumerate()
                .map(|(worker, h)| {
                    h.join().map_err(|p| CoreError::Worker {
                        worker,
                        message: panic_message(p.as_ref()),
                    })
                })
                .collect()
        })
    }
}

fn panic_message(payload: &(dyn Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

/// Seconds since construction, from [`Instant`].
#[derive(Clone, Copy, Debug)]
pub struct MonotonicClock {
    start: Instant,
}

impl MonotonicClock {
    pub fn start() -> Self {
        MonotonicClock {
            start: Instant::now(),
        }
    }
}

impl Clock for MonotonicClock {
    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

/// Runs `cfg.algorithm` on `spec` with `cfg.workers` threads and a wall clock.
pub fn run(spec: &ProblemSpec, cfg: &RunConfig) -> divrect_core::Result<RunResult> {
    solve_with(
        spec,
        cfg,
        &ThreadExecutor::new(cfg.workers),
        &MonotonicClock::start(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use divrect_core::problem::lookup_problem;
    use divrect_core::solve::{solve, Status};

    #[test]
    fn shares_come_back_in_order() {
        let plan = ParallelPlan::balanced(10, 4);
        let out = ThreadExecutor::new(4)
            .execute(&plan, &|r: Range<usize>| r.collect::<Vec<_>>())
            .unwrap();
        let flat: Vec<usize> = out.into_iter().flatten().collect();
        assert_eq!(flat, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn worker_panic_becomes_an_error() {
        let plan = ParallelPlan::balanced(4, 2);
        let err = ThreadExecutor::new(2)
            .execute(&plan, &|r: Range<usize>| {
                if r.start > 0 {
                    panic!("boom");
                }
                r.len()
            })
            .unwrap_err();
        assert_eq!(
            err,
            CoreError::Worker {
                worker: 1,
                message: "boom".into()
            }
        );
    }

    #[test]
    fn threaded_run_matches_sequential() {
        let p = lookup_problem("branin", None).unwrap();
        let mut cfg = RunConfig::new("DIRECT").with_max_iters(25);
        let seq = solve(&p, &cfg).unwrap();
        cfg.workers = 3;
        let par = run(&p, &cfg).unwrap();
        assert_eq!(seq.evals, par.evals);
        assert_eq!(seq.f_min.to_bits(), par.f_min.to_bits());
        assert_eq!(seq.x_min, par.x_min);
        assert_eq!(par.status, seq.status);
        assert_ne!(seq.status, Status::TimeExceeded);
    }

    #[test]
    fn clock_advances() {
        let c = MonotonicClock::start();
        let a = c.elapsed();
        std::thread::sleep(std::time::Duration::from_millis(2));
        assert!(c.elapsed() > a);
    }
}
