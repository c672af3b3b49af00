//! Hyper-rectangles sampled at two points of a main diagonal and refined by bisection.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::math::Real;

use super::{Cell, Eval, MeasureKind, Rank};

/// Where the two diagonal samples sit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalSampling {
    /// At 1/3 and 2/3 of a main diagonal.
    Thirds,
    /// At the two end vertices of a main diagonal.
    Vertices,
}

/// Side length `2^-level` (exact in binary floating point).
fn half_power(level: u8) -> f64 {
    1.0 / 2.0f64.powi(level as i32)
}

/// A hyper-rectangle holding two samples `a`, `b` that are mirror images
/// through its center.
///
/// Bisection along side `j` hands each child the sample lying in it; that
/// sample sits on a main diagonal of the child, and the child's second sample
/// is its mirror image. Inherited points are never re-evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagRect {
    lo: Box<[f64]>,
    levels: Box<[u8]>,
    a: Box<[f64]>,
    b: Box<[f64]>,
    fa: Eval,
    fb: Eval,
    delta: f64,
    kind: MeasureKind,
}

impl DiagRect {
    /// The two initial sample points of the unit cube.
    pub fn initial_points(n: usize, sampling: DiagonalSampling) -> [Vec<f64>; 2] {
        match sampling {
            DiagonalSampling::Thirds => [vec![1.0 / 3.0; n], vec![2.0 / 3.0; n]],
            DiagonalSampling::Vertices => [vec![0.0; n], vec![1.0; n]],
        }
    }

    /// The unit cube with its two evaluated samples.
    pub fn unit(
        n: usize,
        sampling: DiagonalSampling,
        fa: Eval,
        fb: Eval,
        kind: MeasureKind,
    ) -> Self {
        let [a, b] = Self::initial_points(n, sampling);
        Self::from_parts(
            vec![0.0; n].into_boxed_slice(),
            vec![0; n].into_boxed_slice(),
            a.into_boxed_slice(),
            b.into_boxed_slice(),
            fa,
            fb,
            kind,
        )
    }

    fn from_parts(
        lo: Box<[f64]>,
        levels: Box<[u8]>,
        a: Box<[f64]>,
        b: Box<[f64]>,
        fa: Eval,
        fb: Eval,
        kind: MeasureKind,
    ) -> Self {
        let delta = match kind {
            MeasureKind::Euclidean => {
                let mut sorted = levels.to_vec();
                sorted.sort_unstable();
                0.5 * sorted
                    .iter()
                    .map(|&l| half_power(l).powi(2))
                    .sum::<f64>()
                    .sqrt()
            }
            MeasureKind::LongestSide => half_power(levels.iter().copied().min().unwrap_or(0)),
        };
        DiagRect {
            lo,
            levels,
            a,
            b,
            fa,
            fb,
            delta,
            kind,
        }
    }

    pub fn side(&self, j: usize) -> f64 {
        half_power(self.levels[j])
    }

    pub fn lo(&self) -> Vec<f64> {
        self.lo.to_vec()
    }

    pub fn hi(&self) -> Vec<f64> {
        (0..self.lo.len())
            .map(|j| self.lo[j] + self.side(j))
            .collect()
    }

    /// Both samples.
    pub fn points(&self) -> [(&[f64], Eval); 2] {
        [(&self.a, self.fa), (&self.b, self.fb)]
    }

    fn split_axis(&self) -> usize {
        let min = self.levels.iter().copied().min().unwrap_or(0);
        self.levels.iter().position(|&l| l == min).unwrap_or(0)
    }

    /// Child boxes and the inherited sample of each: `(lo, levels, point, value)`.
    #[allow(clippy::type_complexity)]
    fn halves(&self) -> [(Box<[f64]>, Box<[u8]>, &Box<[f64]>, Eval); 2] {
        let j = self.split_axis();
        let half = self.side(j) / 2.0;
        let mut levels = self.levels.clone();
        levels[j] = levels[j].saturating_add(1);
        let mut upper_lo = self.lo.clone();
        upper_lo[j] += half;
        let (low_pt, high_pt) = if self.a[j] <= self.b[j] {
            ((&self.a, self.fa), (&self.b, self.fb))
        } else {
            ((&self.b, self.fb), (&self.a, self.fa))
        };
        [
            (self.lo.clone(), levels.clone(), low_pt.0, low_pt.1),
            (upper_lo, levels, high_pt.0, high_pt.1),
        ]
    }
}

fn mirror(lo: &[f64], levels: &[u8], p: &[f64]) -> Box<[f64]> {
    (0..lo.len())
        .map(|j| {
            let hi = lo[j] + half_power(levels[j]);
            (lo[j] + hi - p[j]).clamp(lo[j], hi)
        })
        .collect()
}

impl Cell for DiagRect {
    fn measure(&self) -> f64 {
        self.delta
    }

    fn volume(&self) -> f64 {
        self.levels.iter().map(|&l| half_power(l)).product()
    }

    fn best(&self) -> (&[f64], Eval) {
        if self.fb.f < self.fa.f {
            (&self.b, self.fb)
        } else {
            (&self.a, self.fa)
        }
    }

    fn samples(&self) -> Vec<(&[f64], Eval)> {
        self.points().to_vec()
    }

    fn split_points(&self) -> Vec<Box<[f64]>> {
        self.halves()
            .iter()
            .map(|(lo, levels, p, _)| mirror(lo, levels, p))
            .collect()
    }

    fn split(&self, values: &[Eval], _rank: Rank<'_>) -> Vec<Self> {
        let fresh = self.split_points();
        self.halves()
            .into_iter()
            .zip(fresh)
            .zip(values)
            .map(|(((lo, levels, p, fp), q), &fq)| {
                Self::from_parts(lo, levels, p.clone(), q, fp, fq, self.kind)
            })
            .collect()
    }

    fn contains(&self, u: &[f64]) -> bool {
        u.iter().enumerate().all(|(j, &v)| {
            let tol = 1e-12 * self.side(j);
            v >= self.lo[j] - tol && v <= self.lo[j] + self.side(j) + tol
        })
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (self.lo(), self.hi())
    }
}
