//! Simplices sampled at their centroid or vertices and refined by longest-edge trisection.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::{determinant, solve_in_place, Real};

use super::{Cell, Eval, Rank};

/// Largest dimension for which the `n!` cube triangulation is built.
pub const MAX_SIMPLEX_DIM: usize = 8;

/// Where a simplex is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplexSampling {
    /// Centroid of the vertices.
    Center,
    /// Every vertex.
    Vertices,
}

/// A simplex of the unit cube with its samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexCell {
    vertices: Box<[Box<[f64]>]>,
    sampling: SimplexSampling,
    /// One point (centroid) or the vertices, matching `values`.
    centroid: Option<Box<[f64]>>,
    values: Box<[Eval]>,
    delta: f64,
}

/// Triangulation of the unit cube into `n!` simplices
/// `{u : u[p0] <= u[p1] <= ... <= u[p(n-1)]}`, one per permutation `p`
/// taken in lexicographic order.
pub fn initial_simplices(n: usize) -> Result<Vec<Vec<Vec<f64>>>> {
    if n == 0 || n > MAX_SIMPLEX_DIM {
        return Err(Error::LimitExceeded {
            what: "simplex triangulation dimension",
            value: n,
            max: MAX_SIMPLEX_DIM,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        // vertices: 0, then switch on coordinates from the largest end of the chain
        let mut v = vec![0.0; n];
        let mut simplex = vec![v.clone()];
        for &axis in perm.iter().rev() {
            v[axis] = 1.0;
            simplex.push(v.clone());
        }
        out.push(simplex);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap_or(i);
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn centroid(vertices: &[Box<[f64]>]) -> Box<[f64]> {
    let n = vertices[0].len();
    let k = vertices.len() as f64;
    (0..n)
        .map(|j| vertices.iter().map(|v| v[j]).sum::<f64>() / k)
        .collect()
}

fn longest_edge(vertices: &[Box<[f64]>]) -> (usize, usize, f64) {
    let mut best = (0, 1, -1.0);
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let d: f64 = vertices[a]
                .iter()
                .zip(vertices[b].iter())
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1, best.2.sqrt())
}

impl SimplexCell {
    /// Points a fresh simplex with these vertices needs evaluated.
    pub fn sample_points(vertices: &[Vec<f64>], sampling: SimplexSampling) -> Vec<Vec<f64>> {
        let boxed: Vec<Box<[f64]>> = vertices
            .iter()
            .map(|v| v.clone().into_boxed_slice())
            .collect();
        match sampling {
            SimplexSampling::Center => vec![centroid(&boxed).to_vec()],
            SimplexSampling::Vertices => vertices.to_vec(),
        }
    }

    /// Builds a simplex from its vertices and the values at [`SimplexCell::sample_points`].
    pub fn new(vertices: &[Vec<f64>], sampling: SimplexSampling, values: &[Eval]) -> Self {
        let boxed: Box<[Box<[f64]>]> = vertices
            .iter()
            .map(|v| v.clone().into_boxed_slice())
            .collect();
        Self::from_parts(boxed, sampling, values.to_vec().into_boxed_slice())
    }

    fn from_parts(
        vertices: Box<[Box<[f64]>]>,
        sampling: SimplexSampling,
        values: Box<[Eval]>,
    ) -> Self {
        let delta = longest_edge(&vertices).2 / 2.0;
        let centroid = match sampling {
            SimplexSampling::Center => Some(centroid(&vertices)),
            SimplexSampling::Vertices => None,
        };
        SimplexCell {
            vertices,
            sampling,
            centroid,
            values,
            delta,
        }
    }

    pub fn vertices(&self) -> &[Box<[f64]>] {
        &self.vertices
    }

    /// Vertices of the three children, middle child first.
    fn children_vertices(&self) -> [Box<[Box<[f64]>]>; 3] {
        let (a, b, _) = longest_edge(&self.vertices);
        let (va, vb) = (&self.vertices[a], &self.vertices[b]);
        let p1: Box<[f64]> = va
            .iter()
            .zip(vb.iter())
            .map(|(x, y)| x + (y - x) / 3.0)
            .collect();
        let p2: Box<[f64]> = va
            .iter()
            .zip(vb.iter())
            .map(|(x, y)| x + 2.0 * (y - x) / 3.0)
            .collect();
        let mut middle = self.vertices.clone();
        middle[a] = p1.clone();
        middle[b] = p2.clone();
        let mut first = self.vertices.clone();
        first[b] = p1;
        let mut last = self.vertices.clone();
        last[a] = p2;
        [middle, first, last]
    }
}

impl Cell for SimplexCell {
    fn measure(&self) -> f64 {
        self.delta
    }

    fn volume(&self) -> f64 {
        let n = self.vertices[0].len();
        let v0 = &self.vertices[0];
        let mut m = Vec::with_capacity(n * n);
        for v in self.vertices[1..].iter() {
            m.extend(v.iter().zip(v0.iter()).map(|(x, y)| x - y));
        }
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        determinant(m, n).abs() / fact
    }

    fn best(&self) -> (&[f64], Eval) {
        match &self.centroid {
            Some(c) => (c, self.values[0]),
            None => {
                let mut k = 0;
                for i in 1..self.values.len() {
                    if self.values[i].f < self.values[k].f {
                        k = i;
                    }
                }
                (&self.vertices[k], self.values[k])
            }
        }
    }

    fn samples(&self) -> Vec<(&[f64], Eval)> {
        match &self.centroid {
            Some(c) => vec![(&c[..], self.values[0])],
            None => self
                .vertices
                .iter()
                .zip(self.values.iter())
                .map(|(v, e)| (&v[..], *e))
                .collect(),
        }
    }

    fn split_points(&self) -> Vec<Box<[f64]>> {
        let [middle, first, last] = self.children_vertices();
        match self.sampling {
            SimplexSampling::Center => vec![centroid(&first), centroid(&last)],
            SimplexSampling::Vertices => {
                // the two trisection points on the longest edge
                let (a, b, _) = longest_edge(&self.vertices);
                vec![middle[a].clone(), middle[b].clone()]
            }
        }
    }

    fn split(&self, values: &[Eval], _rank: Rank<'_>) -> Vec<Self> {
        let [middle, first, last] = self.children_vertices();
        match self.sampling {
            SimplexSampling::Center => {
                // the middle child has the parent's centroid; keep it bit-identical
                let mut mid = Self::from_parts(middle, self.sampling, self.values.clone());
                mid.centroid = self.centroid.clone();
                vec![
                    mid,
                    Self::from_parts(first, self.sampling, vec![values[0]].into_boxed_slice()),
                    Self::from_parts(last, self.sampling, vec![values[1]].into_boxed_slice()),
                ]
            }
            SimplexSampling::Vertices => {
                let (a, b, _) = longest_edge(&self.vertices);
                let (e1, e2) = (values[0], values[1]);
                let mut vm = self.values.clone();
                vm[a] = e1;
                vm[b] = e2;
                let mut vf = self.values.clone();
                vf[b] = e1;
                let mut vl = self.values.clone();
                vl[a] = e2;
                vec![
                    Self::from_parts(middle, self.sampling, vm),
                    Self::from_parts(first, self.sampling, vf),
                    Self::from_parts(last, self.sampling, vl),
                ]
            }
        }
    }

    fn contains(&self, u: &[f64]) -> bool {
        let n = u.len();
        let v0 = &self.vertices[0];
        // solve sum_k lambda_k (v_k - v_0) = u - v_0
        let mut m = vec![0.0; n * n];
        for (k, v) in self.vertices[1..].iter().enumerate() {
            for j in 0..n {
                m[j * n + k] = v[j] - v0[j];
            }
        }
        let mut rhs: Vec<f64> = u.iter().zip(v0.iter()).map(|(x, y)| x - y).collect();
        if solve_in_place(&mut m, &mut rhs, n, 1e-14).is_none() {
            return false;
        }
        let tol = 1e-9;
        rhs.iter().all(|&l| l >= -tol) && rhs.iter().sum::<f64>() <= 1.0 + tol
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.vertices[0].len();
        let lo = (0..n)
            .map(|j| {
                self.vertices
                    .iter()
                    .map(|v| v[j])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let hi = (0..n)
            .map(|j| {
                self.vertices
                    .iter()
                    .map(|v| v[j])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none(_: &Eval) -> f64 {
        0.0
    }

    #[test]
    fn square_triangulation() {
        let s = initial_simplices(2).unwrap();
        assert_eq!(s.len(), 2);
        let want_a = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let want_b = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        assert!(s.contains(&want_a) && s.contains(&want_b));
        assert_eq!(initial_simplices(4).unwrap().len(), 24);
        assert!(matches!(
            initial_simplices(9),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn triangulation_volumes_sum_to_one() {
        for n in 1..=5 {
            let total: f64 = initial_simplices(n)
                .unwrap()
                .iter()
                .map(|s| SimplexCell::new(s, SimplexSampling::Center, &[Eval::plain(0.0)]).volume())
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "n = {n}: {total}");
        }
    }

    #[test]
    fn centroid_children_reuse_parent_sample() {
        let verts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let s = SimplexCell::new(&verts, SimplexSampling::Center, &[Eval::plain(7.0)]);
        let pts = s.split_points();
        assert_eq!(pts.len(), 2);
        let kids = s.split(&[Eval::plain(1.0), Eval::plain(2.0)], &none);
        assert_eq!(kids[0].best().0, s.best().0);
        assert_eq!(kids[0].best().1.f, 7.0);
        for k in &kids {
            assert!((k.volume() - s.volume() / 3.0).abs() < 1e-15);
        }
        // longest edge is (0,0)-(1,1), of length sqrt 2
        assert!((s.measure() - core::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn vertex_children_carry_vertex_values() {
        let verts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let vals = [Eval::plain(0.0), Eval::plain(1.0), Eval::plain(2.0)];
        let s = SimplexCell::new(&verts, SimplexSampling::Vertices, &vals);
        let pts = s.split_points();
        assert!((pts[0][0] - 1.0 / 3.0).abs() < 1e-15 && (pts[1][1] - 2.0 / 3.0).abs() < 1e-15);
        let kids = s.split(&[Eval::plain(-1.0), Eval::plain(5.0)], &none);
        for k in &kids {
            for (p, e) in k.samples() {
                if p == &pts[0][..] {
                    assert_eq!(e.f, -1.0);
                }
            }
        }
        assert_eq!(kids[1].best().1.f, -1.0);
    }

    #[test]
    fn containment_uses_barycentric_coordinates() {
        let verts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let s = SimplexCell::new(&verts, SimplexSampling::Center, &[Eval::plain(0.0)]);
        assert!(s.contains(&[0.5, 0.25]));
        assert!(s.contains(&[0.5, 0.5]));
        assert!(!s.contains(&[0.25, 0.5]));
    }
}
