//! Bounded derivative-free local minimization.
//!
//! The main method is a sequential quadratic programming loop with
//! forward-difference gradients, a damped BFGS model of the Lagrangian and
//! an exact-penalty line search. When it cannot make a first step (for
//! instance on a kink of a nonsmooth objective) a compass search takes over.

use alloc::vec;
use alloc::vec::Vec;

use crate::constraints::L1_GAMMA;
use crate::math::solve_in_place;
use crate::partition::normalize_domain;
use crate::problem::{ProblemSpec, EPS_H};

/// Objective value and inequality values `g <= 0` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalPoint {
    pub f: f64,
    pub g: Vec<f64>,
}

/// Outcome of a local minimization.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalResult {
    pub x: Vec<f64>,
    pub f: f64,
    /// Penalized value `f + gamma * sum max(g, 0)` at `x`.
    pub merit: f64,
    /// Evaluations spent.
    pub used: usize,
}

const FD_STEP: f64 = 1e-7;
const STEP_TOL: f64 = 1e-10;

fn merit(p: &LocalPoint, mu: f64) -> f64 {
    if !p.f.is_finite() {
        return f64::INFINITY;
    }
    p.f + mu * p.g.iter().map(|v| v.max(0.0)).sum::<f64>()
}

struct Budgeted<'a> {
    eval: &'a mut dyn FnMut(&[f64]) -> LocalPoint,
    left: usize,
    used: usize,
}

impl Budgeted<'_> {
    fn call(&mut self, x: &[f64]) -> Option<LocalPoint> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        self.used += 1;
        Some((self.eval)(x))
    }
}

/// Minimizes `f + gamma * sum max(g, 0)` over the box from `x0`.
///
/// `start` may carry the already known value at `x0` to save an evaluation.
/// Every call of `eval` counts against `budget`; the returned point is never
/// worse than `x0` in the penalized sense.
pub fn minimize(
    eval: &mut dyn FnMut(&[f64]) -> LocalPoint,
    lower: &[f64],
    upper: &[f64],
    x0: &[f64],
    start: Option<LocalPoint>,
    budget: usize,
) -> LocalResult {
    let x0: Vec<f64> = x0
        .iter()
        .zip(lower.iter().zip(upper))
        .map(|(v, (l, u))| v.clamp(*l, *u))
        .collect();
    let mut run = Budgeted {
        eval,
        left: budget,
        used: 0,
    };
    let p0 = match start {
        Some(p) => p,
        None => match run.call(&x0) {
            Some(p) => p,
            None => {
                return LocalResult {
                    x: x0,
                    f: f64::INFINITY,
                    merit: f64::INFINITY,
                    used: 0,
                }
            }
        },
    };
    let (x, p, progressed) = sqp(&mut run, lower, upper, x0, p0);
    let (x, p) = if progressed || run.left == 0 {
        (x, p)
    } else {
        compass(&mut run, lower, upper, x, p)
    };
    LocalResult {
        f: p.f,
        merit: merit(&p, L1_GAMMA),
        x,
        used: run.used,
    }
}

/// Minimizes a problem from `x0` (original coordinates) with an evaluation budget.
///
/// Equalities enter as `|h| - eps_h <= 0`. Returns the point, its objective
/// value and the evaluations used.
pub fn local_search(spec: &ProblemSpec, x0: &[f64], budget: usize) -> (Vec<f64>, f64, usize) {
    if budget == 0 {
        return (x0.to_vec(), spec.objective_unchecked(x0), 0);
    }
    let map = normalize_domain(spec);
    let mut eval = |u: &[f64]| {
        let x = map.to_original(u);
        LocalPoint {
            f: spec.objective_unchecked(&x),
            g: inequality_values(spec, &x),
        }
    };
    let n = spec.dim();
    let r = minimize(
        &mut eval,
        &vec![0.0; n],
        &vec![1.0; n],
        &map.to_unit(x0),
        None,
        budget,
    );
    (map.to_original(&r.x), r.f, r.used)
}

/// Inequality values with equalities relaxed by the unit tolerance.
pub fn inequality_values(spec: &ProblemSpec, x: &[f64]) -> Vec<f64> {
    spec.inequalities
        .iter()
        .map(|c| c.value(x))
        .chain(spec.equalities.iter().map(|h| h.value(x).abs() - EPS_H))
        .collect()
}

fn gradients(
    run: &mut Budgeted<'_>,
    lower: &[f64],
    upper: &[f64],
    x: &[f64],
    p: &LocalPoint,
) -> Option<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = x.len();
    let m = p.g.len();
    let mut gf = vec![0.0; n];
    let mut jac = vec![vec![0.0; n]; m];
    let mut probe = x.to_vec();
    for j in 0..n {
        let mut h = FD_STEP * (upper[j] - lower[j]).max(f64::MIN_POSITIVE);
        if x[j] + h > upper[j] {
            h = -h;
        }
        probe[j] = x[j] + h;
        let q = run.call(&probe)?;
        probe[j] = x[j];
        if !q.f.is_finite() {
            return None;
        }
        gf[j] = (q.f - p.f) / h;
        for (i, row) in jac.iter_mut().enumerate().take(m) {
            row[j] = (q.g[i] - p.g[i]) / h;
        }
    }
    Some((gf, jac))
}

/// Dual projected Gauss-Seidel for `min 1/2 d'Bd + c'd  s.t.  A d <= b`.
/// Returns the step and the multipliers, or `None` when the constraints look
/// inconsistent.
fn qp(b_mat: &[f64], c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = c.len();
    let r = a.len();
    // columns of B^-1 A' and B^-1 c
    let mut binv_at: Vec<Vec<f64>> = Vec::with_capacity(r);
    for row in a {
        let mut m = b_mat.to_vec();
        let mut v = row.clone();
        solve_in_place(&mut m, &mut v, n, 1e-14)?;
        binv_at.push(v);
    }
    let mut m0 = b_mat.to_vec();
    let mut binv_c = c.to_vec();
    solve_in_place(&mut m0, &mut binv_c, n, 1e-14)?;
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let mm: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..r).map(|k| dot(&a[i], &binv_at[k])).collect())
        .collect();
    let q: Vec<f64> = (0..r).map(|i| dot(&a[i], &binv_c) + b[i]).collect();
    let mut lam = vec![0.0; r];
    for _ in 0..5000 {
        let mut change: f64 = 0.0;
        for i in 0..r {
            if mm[i][i] <= 1e-300 {
                continue;
            }
            let grad = dot(&mm[i], &lam) + q[i];
            let next = (lam[i] - grad / mm[i][i]).max(0.0);
            change = change.max((next - lam[i]).abs());
            lam[i] = next;
        }
        let scale = 1.0 + lam.iter().fold(0.0f64, |m, v| m.max(*v));
        if scale > 1e12 {
            return None;
        }
        if change <= 1e-13 * scale {
            break;
        }
    }
    let mut d = binv_c;
    for (k, l) in lam.iter().enumerate() {
        for j in 0..n {
            d[j] += l * binv_at[k][j];
        }
    }
    d.iter_mut().for_each(|v| *v = -*v);
    // a diverging dual leaves the primal step infeasible
    let infeasible = a
        .iter()
        .zip(b)
        .any(|(row, bi)| dot(row, &d) - bi > 1e-8 * (1.0 + bi.abs()));
    if infeasible {
        return None;
    }
    Some((d, lam))
}

fn lagrangian_grad(gf: &[f64], jac: &[Vec<f64>], lam: &[f64]) -> Vec<f64> {
    let mut out = gf.to_vec();
    for (row, l) in jac.iter().zip(lam) {
        for (o, v) in out.iter_mut().zip(row) {
            *o += l * v;
        }
    }
    out
}

/// Returns the final point, its value and whether any step was accepted.
fn sqp(
    run: &mut Budgeted<'_>,
    lower: &[f64],
    upper: &[f64],
    mut x: Vec<f64>,
    mut p: LocalPoint,
) -> (Vec<f64>, LocalPoint, bool) {
    let n = x.len();
    let m = p.g.len();
    let mut bm = vec![0.0; n * n];
    for j in 0..n {
        bm[j * n + j] = 1.0;
    }
    let mut mu = L1_GAMMA;
    let mut progressed = false;
    let mut previous: Option<(Vec<f64>, Vec<f64>, Vec<f64>)> = None; // (x, grad L at x, lambda)
    let mut scaled = false;
    while run.left > n {
        let Some((gf, jac)) = gradients(run, lower, upper, &x, &p) else {
            break;
        };
        if let Some((px, pgl, plam)) = previous.take() {
            let s: Vec<f64> = x.iter().zip(&px).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = lagrangian_grad(&gf, &jac, &plam)
                .iter()
                .zip(&pgl)
                .map(|(a, b)| a - b)
                .collect();
            bfgs(&mut bm, &s, &y, &mut scaled);
        }
        let mut rows: Vec<Vec<f64>> = jac.clone();
        let mut rhs: Vec<f64> = p.g.iter().map(|v| -v).collect();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            rows.push(e.clone());
            rhs.push(upper[j] - x[j]);
            e[j] = -1.0;
            rows.push(e);
            rhs.push(x[j] - lower[j]);
        }
        let (d, lam) = match qp(&bm, &gf, &rows, &rhs) {
            Some(v) => v,
            None => {
                // inconsistent linearization: step on the penalized gradient within the box
                let mut c = gf.clone();
                for (i, row) in jac.iter().enumerate() {
                    if p.g[i] > 0.0 {
                        c.iter_mut().zip(row).for_each(|(a, b)| *a += mu * b);
                    }
                }
                match qp(&bm, &c, &rows[m..], &rhs[m..]) {
                    Some((d, _)) => (d, vec![0.0; m + 2 * n]),
                    None => break,
                }
            }
        };
        let lam_g: Vec<f64> = lam[..m].to_vec();
        mu = mu.max(1.5 * lam_g.iter().fold(0.0f64, |a, b| a.max(*b)));
        let dnorm = d.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let violation: f64 = p.g.iter().map(|v| v.max(0.0)).sum();
        if dnorm <= STEP_TOL {
            break;
        }
        let m0 = merit(&p, mu);
        let slope = gf.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() - mu * violation;
        let mut alpha = 1.0;
        let mut accepted = None;
        while alpha * dnorm > STEP_TOL {
            let trial: Vec<f64> = (0..n)
                .map(|j| (x[j] + alpha * d[j]).clamp(lower[j], upper[j]))
                .collect();
            let Some(q) = run.call(&trial) else { break };
            let mt = merit(&q, mu);
            if mt <= m0 + 1e-4 * alpha * slope.min(0.0) && mt < m0 {
                accepted = Some((trial, q));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xn, q)) = accepted else { break };
        previous = Some((x.clone(), lagrangian_grad(&gf, &jac, &lam_g), lam_g));
        x = xn;
        p = q;
        progressed = true;
    }
    (x, p, progressed)
}

fn bfgs(bm: &mut [f64], s: &[f64], y: &[f64], scaled: &mut bool) {
    let n = s.len();
    let sy: f64 = s.iter().zip(y).map(|(a, b)| a * b).sum();
    let ss: f64 = s.iter().map(|v| v * v).sum();
    if ss <= 1e-300 {
        return;
    }
    if !*scaled && sy > 0.0 {
        let yy: f64 = y.iter().map(|v| v * v).sum();
        let gamma = yy / sy;
        bm.iter_mut().for_each(|v| *v *= gamma);
        *scaled = true;
    }
    let bs: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| bm[i * n + k] * s[k]).sum())
        .collect();
    let sbs: f64 = s.iter().zip(&bs).map(|(a, b)| a * b).sum();
    if sbs <= 1e-300 {
        return;
    }
    // Powell damping keeps the model positive definite
    let theta = if sy >= 0.2 * sbs {
        1.0
    } else {
        0.8 * sbs / (sbs - sy)
    };
    let r: Vec<f64> = (0..n)
        .map(|i| theta * y[i] + (1.0 - theta) * bs[i])
        .collect();
    let sr: f64 = s.iter().zip(&r).map(|(a, b)| a * b).sum();
    if sr <= 1e-300 {
        return;
    }
    for i in 0..n {
        for k in 0..n {
            bm[i * n + k] += r[i] * r[k] / sr - bs[i] * bs[k] / sbs;
        }
    }
}

/// Opportunistic compass search with step halving.
fn compass(
    run: &mut Budgeted<'_>,
    lower: &[f64],
    upper: &[f64],
    mut x: Vec<f64>,
    mut p: LocalPoint,
) -> (Vec<f64>, LocalPoint) {
    let n = x.len();
    let mut step: Vec<f64> = (0..n).map(|j| 0.1 * (upper[j] - lower[j])).collect();
    let mut best = merit(&p, L1_GAMMA);
    'outer: while step.iter().any(|s| *s > 1e-9) {
        let mut improved = false;
        for j in 0..n {
            for sign in [1.0, -1.0] {
                let mut t = x.clone();
                t[j] = (x[j] + sign * step[j]).clamp(lower[j], upper[j]);
                if t[j] == x[j] {
                    continue;
                }
                let Some(q) = run.call(&t) else { break 'outer };
                let mq = merit(&q, L1_GAMMA);
                if mq < best {
                    best = mq;
                    x = t;
                    p = q;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    (x, p)
}
