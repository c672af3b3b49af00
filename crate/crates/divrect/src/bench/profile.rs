//! Cost matrices and performance profiles.

use divrect_core::solve::FAILURE_SENTINEL;

use crate::error::{Error, Result};

/// Cost recorded for a failed or skipped run.
pub const SENTINEL: f64 = FAILURE_SENTINEL as f64;
/// Largest ratio plotted by default.
pub const DEFAULT_MAX_BETA: f64 = 1e4;
/// Number of grid points sampled by default.
pub const DEFAULT_POINTS: usize = 200;
/// Relative slack absorbing rounding in `lambda <= beta`.
pub const RATIO_TOL: f64 = 1e-12;

/// Cost of every solver on every problem. `t[s][p]` belongs to solver `s`
/// and problem `p`; [`SENTINEL`] marks a failure.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    pub solvers: Vec<String>,
    pub problems: Vec<String>,
    pub t: Vec<Vec<f64>>,
}

impl CostMatrix {
    /// Checks shape and positivity.
    pub fn new(solvers: Vec<String>, problems: Vec<String>, t: Vec<Vec<f64>>) -> Result<Self> {
        if t.len() != solvers.len() {
            return Err(Error::Matrix(format!(
                "{} rows for {} solvers",
                t.len(),
                solvers.len()
            )));
        }
        for (s, row) in t.iter().enumerate() {
            if row.len() != problems.len() {
                return Err(Error::Matrix(format!(
                    "solver `{}` has {} entries for {} problems",
                    solvers[s],
                    row.len(),
                    problems.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| **v <= 0.0 || !v.is_finite()) {
                return Err(Error::Matrix(format!(
                    "solver `{}` has non-positive cost {v}",
                    solvers[s]
                )));
            }
        }
        Ok(CostMatrix {
            solvers,
            problems,
            t,
        })
    }

    pub fn is_failure(v: f64) -> bool {
        v >= SENTINEL
    }
}

/// Ratios and cumulative curves of a cost matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileData {
    pub solvers: Vec<String>,
    pub problems: Vec<String>,
    /// `ratios[s][p]`, `+inf` for failures.
    pub ratios: Vec<Vec<f64>>,
    /// Grid the curves are sampled on.
    pub beta: Vec<f64>,
    /// `chi[s][k]` is the curve of solver `s` at `beta[k]`.
    pub chi: Vec<Vec<f64>>,
}

impl ProfileData {
    /// Fraction of problems with ratio at most `beta` for solver `s`.
    pub fn chi_at(&self, s: usize, beta: f64) -> f64 {
        fraction_within(&self.ratios[s], beta)
    }

    /// Fraction of problems solver `s` wins, ties included.
    pub fn win_fraction(&self, s: usize) -> f64 {
        self.chi_at(s, 1.0)
    }
}

fn fraction_within(ratios: &[f64], beta: f64) -> f64 {
    if ratios.is_empty() {
        return 0.0;
    }
    let limit = beta * (1.0 + RATIO_TOL);
    let hits = ratios.iter().filter(|&&r| r <= limit).count();
    hits as f64 / ratios.len() as f64
}

/// `count` log-spaced points on `[lo, hi]` with exact endpoints.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let last = count - 1;
            (0..count)
                .map(|k| match k {
                    0 => lo,
                    k if k == last => hi,
                    k => (a + (b - a) * k as f64 / last as f64).exp(),
                })
                .collect()
        }
    }
}

/// Ratios against the per-problem best and curves sampled on `grid`.
///
/// Failures get an infinite ratio and never count. A problem nobody solved
/// gives every solver an infinite ratio.
#[allow(clippy::needless_range_loop)]
pub fn perf_profile(m: &CostMatrix, grid: &[f64]) -> ProfileData {
    let ns = m.solvers.len();
    let np = m.problems.len();
    let mut ratios = vec![vec![f64::INFINITY; np]; ns];
    for p in 0..np {
        let best = (0..ns)
            .map(|s| m.t[s][p])
            .filter(|&v| !CostMatrix::is_failure(v))
            .fold(f64::INFINITY, f64::min);
        if !best.is_finite() {
            continue;
        }
        for s in 0..ns {
            let v = m.t[s][p];
            if !CostMatrix::is_failure(v) {
                ratios[s][p] = v / best;
            }
        }
    }
    let chi = ratios
        .iter()
        .map(|r| grid.iter().map(|&b| fraction_within(r, b)).collect())
        .collect();
    ProfileData {
        solvers: m.solvers.clone(),
        problems: m.problems.clone(),
        ratios,
        beta: grid.to_vec(),
        chi,
    }
}
