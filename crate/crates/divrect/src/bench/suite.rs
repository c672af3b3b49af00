//! Running algorithm-by-problem matrices and aggregating their outcomes.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use divrect_core::problem::ProblemSpec;
use divrect_core::solve::{RunConfig, RunResult, FAILURE_SENTINEL};
use divrect_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use super::profile::{CostMatrix, SENTINEL};
use crate::error::{Error, Result};
use crate::exec::run;

/// Status written for a pair the algorithm cannot handle.
pub const NOT_APPLICABLE: &str = "n/a";
/// Status written for a run that returned an error.
pub const ERRORED: &str = "error";
/// Smallest time cost, keeping time matrices strictly positive.
pub const MIN_TIME: f64 = 1e-9;

/// One algorithm-problem run, as stored in result files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub algorithm: String,
    pub n: usize,
    pub class: String,
    /// `solved`, `budget`, `time`, `iterations`, `n/a` or `error`.
    pub status: String,
    /// Evaluations to solve, or the failure sentinel.
    pub fevals: usize,
    pub iters: usize,
    pub time_s: f64,
    /// Best feasible value (`inf` when none).
    pub f_min: f64,
}

impl RunRecord {
    pub fn solved(&self) -> bool {
        self.status == "solved"
    }

    pub fn applicable(&self) -> bool {
        self.status != NOT_APPLICABLE
    }

    fn from_outcome(
        spec: &ProblemSpec,
        algorithm: &str,
        outcome: &std::result::Result<RunResult, CoreError>,
    ) -> Self {
        let mut rec = RunRecord {
            problem: spec.name.clone(),
            algorithm: algorithm.to_string(),
            n: spec.dim(),
            class: spec.class().as_str().to_string(),
            status: ERRORED.to_string(),
            fevals: FAILURE_SENTINEL,
            iters: 0,
            time_s: 0.0,
            f_min: f64::INFINITY,
        };
        match outcome {
            Ok(r) => {
                rec.status = r.status.as_str().to_string();
                rec.fevals = r.cost();
                rec.iters = r.iters;
                rec.time_s = r.elapsed;
                rec.f_min = r.f_min;
            }
            Err(CoreError::IncompatibleClass { .. }) => rec.status = NOT_APPLICABLE.to_string(),
            Err(_) => {}
        }
        rec
    }
}

/// Records of a suite plus the full results of the runs that happened.
#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub records: Vec<RunRecord>,
    /// `None` for skipped or errored pairs; same order as `records`.
    pub results: Vec<Option<RunResult>>,
}

/// Runs every algorithm on every problem, algorithm-major.
///
/// Up to `jobs` pairs run at once; each run itself uses `base.workers`
/// threads. Pairs of incompatible class are recorded as `n/a` and errors as
/// failures.
pub fn run_suite(
    algorithms: &[String],
    problems: &[ProblemSpec],
    base: &RunConfig,
    jobs: usize,
) -> SuiteRun {
    let pairs: Vec<(usize, usize)> = (0..algorithms.len())
        .flat_map(|a| (0..problems.len()).map(move |p| (a, p)))
        .collect();
    let next = AtomicUsize::new(0);
    let work = || {
        let mut done = Vec::new();
        loop {
            let k = next.fetch_add(1, Ordering::Relaxed);
            let Some(&(a, p)) = pairs.get(k) else { break };
            let mut cfg = base.clone();
            cfg.algorithm = algorithms[a].clone();
            let outcome = run(&problems[p], &cfg);
            let rec = RunRecord::from_outcome(&problems[p], &algorithms[a], &outcome);
            done.push((k, rec, outcome.ok()));
        }
        done
    };
    let jobs = jobs.clamp(1, pairs.len().max(1));
    let mut done: Vec<_> = if jobs == 1 {
        work()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs).map(|_| s.spawn(work)).collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite worker panicked"))
                .collect()
        })
    };
    done.sort_by_key(|d| d.0);
    let (records, results) = done.into_iter().map(|(_, r, o)| (r, o)).unzip();
    SuiteRun { records, results }
}

/// Which column of a record is the cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Fevals,
    Time,
}

impl Metric {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fevals" => Some(Metric::Fevals),
            "time" => Some(Metric::Time),
            _ => None,
        }
    }
}

/// Cost matrix of a set of records. Solvers and problems keep their order of
/// first appearance. Unsolved and skipped pairs cost [`SENTINEL`].
pub fn cost_matrix(records: &[RunRecord], metric: Metric) -> Result<CostMatrix> {
    let mut solvers: Vec<String> = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    for r in records {
        if !solvers.contains(&r.algorithm) {
            solvers.push(r.algorithm.clone());
        }
        if !problems.contains(&r.problem) {
            problems.push(r.problem.clone());
        }
    }
    let mut t = vec![vec![f64::NAN; problems.len()]; solvers.len()];
    for r in records {
        let s = solvers.iter().position(|x| *x == r.algorithm).unwrap();
        let p = problems.iter().position(|x| *x == r.problem).unwrap();
        if !t[s][p].is_nan() {
            return Err(Error::Matrix(format!(
                "duplicate run of `{}` on `{}`",
                r.algorithm, r.problem
            )));
        }
        t[s][p] = match (r.solved(), metric) {
            (false, _) => SENTINEL,
            (true, Metric::Fevals) => r.fevals as f64,
            (true, Metric::Time) => r.time_s.max(MIN_TIME),
        };
    }
    for (s, row) in t.iter().enumerate() {
        if let Some(p) = row.iter().position(|v| v.is_nan()) {
            return Err(Error::Matrix(format!(
                "no run of `{}` on `{}`",
                solvers[s], problems[p]
            )));
        }
    }
    CostMatrix::new(solvers, problems, t)
}

/// Averages and medians over the applicable runs of one subset.
#[derive(Clone, Debug, PartialEq)]
pub struct Stats {
    pub runs: usize,
    pub failed: usize,
    pub avg_fevals: f64,
    pub median_fevals: f64,
    pub avg_time: f64,
    pub median_time: f64,
    pub avg_iters: f64,
    pub median_iters: f64,
}

/// Statistics of one algorithm on one subset of problems.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub algorithm: String,
    /// `all`, `n<=4`, `n>=5` or a problem class.
    pub subset: String,
    pub stats: Stats,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let mid = s.len() / 2;
    if s.len() % 2 == 1 {
        s[mid]
    } else {
        0.5 * (s[mid - 1] + s[mid])
    }
}

fn stats(runs: &[&RunRecord]) -> Stats {
    let col = |f: &dyn Fn(&RunRecord) -> f64| runs.iter().map(|r| f(r)).collect::<Vec<f64>>();
    let fevals = col(&|r| r.fevals as f64);
    let time = col(&|r| r.time_s);
    let iters = col(&|r| r.iters as f64);
    Stats {
        runs: runs.len(),
        failed: runs.iter().filter(|r| !r.solved()).count(),
        avg_fevals: mean(&fevals),
        median_fevals: median(&fevals),
        avg_time: mean(&time),
        median_time: median(&time),
        avg_iters: mean(&iters),
        median_iters: median(&iters),
    }
}

const CLASS_ORDER: [&str; 4] = ["box", "linear", "nonlinear", "hidden"];

/// Per-algorithm statistics overall, by dimension (`n <= 4` against
/// `n >= 5`) and by problem class. Skipped pairs are left out and empty
/// subsets omitted. Failed runs enter the averages with the sentinel cost.
pub fn aggregate(records: &[RunRecord]) -> Vec<Summary> {
    let mut order: Vec<&str> = Vec::new();
    let mut by_alg: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.applicable()) {
        if !order.contains(&r.algorithm.as_str()) {
            order.push(&r.algorithm);
        }
        by_alg.entry(&r.algorithm).or_default().push(r);
    }
    let mut out = Vec::new();
    for alg in order {
        let runs = &by_alg[alg];
        let mut subsets: Vec<(String, Vec<&RunRecord>)> = vec![
            ("all".into(), runs.clone()),
            (
                "n<=4".into(),
                runs.iter().copied().filter(|r| r.n <= 4).collect(),
            ),
            (
                "n>=5".into(),
                runs.iter().copied().filter(|r| r.n >= 5).collect(),
            ),
        ];
        for class in CLASS_ORDER {
            subsets.push((
                class.into(),
                runs.iter().copied().filter(|r| r.class == class).collect(),
            ));
        }
        for (subset, members) in subsets {
            if !members.is_empty() {
                out.push(Summary {
                    algorithm: alg.to_string(),
                    subset,
                    stats: stats(&members),
                });
            }
        }
    }
    out
}
