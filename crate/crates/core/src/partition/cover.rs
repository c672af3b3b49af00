//! Simplicial cover of a linearly constrained feasible region.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::{rank, solve_in_place, Real};
use crate::problem::{Constraint, ProblemSpec};

const MAX_DIM: usize = 6;
const MAX_CONSTRAINTS: usize = 12;
const FEAS_TOL: f64 = 1e-9;
const MERGE_TOL: f64 = 1e-8;

/// Half-space `a . u + b <= 0` in unit-cube coordinates, with `|a| = 1`.
struct Plane {
    a: Vec<f64>,
    b: f64,
}

impl Plane {
    fn eval(&self, u: &[f64]) -> f64 {
        self.a.iter().zip(u).map(|(x, y)| x * y).sum::<f64>() + self.b
    }
}

fn planes(spec: &ProblemSpec) -> Result<Vec<Plane>> {
    let n = spec.dim();
    let mut out = Vec::with_capacity(2 * n + spec.inequalities.len());
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = -1.0;
        out.push(Plane {
            a: e.clone(),
            b: 0.0,
        });
        e[j] = 1.0;
        out.push(Plane { a: e, b: -1.0 });
    }
    for g in &spec.inequalities {
        let Constraint::Affine { coeffs, offset } = g else {
            return Err(Error::InvalidArgument(
                "a simplicial feasible cover needs affine inequality constraints only".into(),
            ));
        };
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: coeffs.len(),
            });
        }
        // x = lower + width * u
        let a: Vec<f64> = (0..n)
            .map(|j| coeffs[j] * (spec.upper[j] - spec.lower[j]))
            .collect();
        let b = offset + (0..n).map(|j| coeffs[j] * spec.lower[j]).sum::<f64>();
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            if b > FEAS_TOL {
                return Err(Error::EmptyFeasibleRegion);
            }
            continue;
        }
        out.push(Plane {
            a: a.iter().map(|v| v / norm).collect(),
            b: b / norm,
        });
    }
    Ok(out)
}

fn for_each_subset(total: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > total {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + total - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn affine_dim(points: &[&Vec<f64>], n: usize) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let rows: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0].iter()).map(|(x, y)| x - y).collect())
        .collect();
    rank(&rows, n, 1e-9)
}

/// Splits the feasible polytope `{lower <= x <= upper, g(x) <= 0}` of a
/// linearly constrained problem into simplices.
///
/// Vertices come from every `n`-subset of the `2n + m` bounding hyperplanes
/// (feasibility tolerance `1e-9`, duplicates merged within `1e-8`); the
/// polytope is then triangulated by coning each facet not containing the
/// lexicographically smallest vertex, recursively. Simplices are returned in
/// unit-cube coordinates. Supports `n <= 6` and `m <= 12`.
pub fn feasible_cover_simplices(spec: &ProblemSpec) -> Result<Vec<Vec<Vec<f64>>>> {
    let n = spec.dim();
    if n > MAX_DIM {
        return Err(Error::LimitExceeded {
            what: "linearly constrained dimension",
            value: n,
            max: MAX_DIM,
        });
    }
    if spec.inequalities.len() > MAX_CONSTRAINTS {
        return Err(Error::LimitExceeded {
            what: "number of linear constraints",
            value: spec.inequalities.len(),
            max: MAX_CONSTRAINTS,
        });
    }
    if !spec.equalities.is_empty() {
        return Err(Error::InvalidArgument(
            "a simplicial feasible cover does not support equality constraints".into(),
        ));
    }
    let planes = planes(spec)?;

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut a = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    for_each_subset(planes.len(), n, |subset| {
        for (r, &h) in subset.iter().enumerate() {
            a[r * n..(r + 1) * n].copy_from_slice(&planes[h].a);
            rhs[r] = -planes[h].b;
        }
        if solve_in_place(&mut a, &mut rhs, n, 1e-12).is_none() {
            return;
        }
        if planes.iter().any(|p| p.eval(&rhs) > FEAS_TOL) {
            return;
        }
        let u: Vec<f64> = rhs.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let dup = vertices
            .iter()
            .any(|v| v.iter().zip(&u).all(|(x, y)| (x - y).abs() <= MERGE_TOL));
        if !dup {
            vertices.push(u);
        }
    });
    if vertices.is_empty() {
        return Err(Error::EmptyFeasibleRegion);
    }
    vertices.sort_by(|x, y| {
        x.iter()
            .zip(y)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let all: Vec<&Vec<f64>> = vertices.iter().collect();
    let dim = affine_dim(&all, n);
    if dim < n {
        return Err(Error::DegenerateFeasibleRegion { dim, n });
    }

    let incidence: Vec<Vec<bool>> = vertices
        .iter()
        .map(|v| planes.iter().map(|p| p.eval(v).abs() <= FEAS_TOL).collect())
        .collect();
    let face: Vec<usize> = (0..vertices.len()).collect();
    let mut out = Vec::new();
    triangulate(
        &face,
        n,
        &vertices,
        &incidence,
        planes.len(),
        &mut Vec::new(),
        &mut out,
    );
    Ok(out
        .into_iter()
        .map(|s| s.into_iter().map(|i| vertices[i].clone()).collect())
        .collect())
}

fn triangulate(
    face: &[usize],
    dim: usize,
    vertices: &[Vec<f64>],
    incidence: &[Vec<bool>],
    nplanes: usize,
    apexes: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if face.len() == dim + 1 {
        let mut s = apexes.clone();
        s.extend_from_slice(face);
        out.push(s);
        return;
    }
    let apex = face[0];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in 0..nplanes {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| incidence[v][h]).collect();
        if sub.len() < dim || sub.contains(&apex) || seen.contains(&sub) {
            continue;
        }
        let pts: Vec<&Vec<f64>> = sub.iter().map(|&i| &vertices[i]).collect();
        if affine_dim(&pts, vertices[0].len()) != dim - 1 {
            continue;
        }
        seen.insert(sub.clone());
        apexes.push(apex);
        triangulate(&sub, dim - 1, vertices, incidence, nplanes, apexes, out);
        apexes.pop();
    }
}
