//! Hyper-rectangles sampled at their center and refined by trisection.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::math::Real;

use super::{Cell, Eval, MeasureKind, Rank};

/// Which longest sides a trisection splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TrisectRule {
    /// Every side of maximal length, best values kept in the largest children.
    #[default]
    AllLongest,
    /// Only the lowest-index longest side.
    OneLongest,
}

/// Side length `3^-level`.
pub fn third_power(level: u8) -> f64 {
    1.0 / 3.0f64.powi(level as i32)
}

/// A hyper-rectangle of the unit cube with its center sample.
///
/// Side `j` has length `3^-levels[j]`, so cells of equal level multiset share
/// a bit-identical measure.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperRect {
    center: Box<[f64]>,
    levels: Box<[u8]>,
    eval: Eval,
    delta: f64,
    kind: MeasureKind,
    rule: TrisectRule,
}

impl HyperRect {
    /// The whole unit cube sampled at its center.
    pub fn unit(n: usize, eval: Eval, kind: MeasureKind, rule: TrisectRule) -> Self {
        Self::from_parts(
            vec![0.5; n].into_boxed_slice(),
            vec![0; n].into_boxed_slice(),
            eval,
            kind,
            rule,
        )
    }

    /// Cube center point for an `n`-dimensional unit cube.
    pub fn unit_center(n: usize) -> Vec<f64> {
        vec![0.5; n]
    }

    fn from_parts(
        center: Box<[f64]>,
        levels: Box<[u8]>,
        eval: Eval,
        kind: MeasureKind,
        rule: TrisectRule,
    ) -> Self {
        let delta = level_measure(&levels, kind);
        HyperRect {
            center,
            levels,
            eval,
            delta,
            kind,
            rule,
        }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn eval(&self) -> Eval {
        self.eval
    }

    /// Trisection level of each side.
    pub fn side_levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn side(&self, j: usize) -> f64 {
        third_power(self.levels[j])
    }

    pub fn lo(&self) -> Vec<f64> {
        (0..self.center.len())
            .map(|j| self.center[j] - self.side(j) / 2.0)
            .collect()
    }

    pub fn hi(&self) -> Vec<f64> {
        (0..self.center.len())
            .map(|j| self.center[j] + self.side(j) / 2.0)
            .collect()
    }

    /// Axes split by the next trisection, in index order.
    pub fn split_axes(&self) -> Vec<usize> {
        let min = self.levels.iter().copied().min().unwrap_or(0);
        let axes = (0..self.levels.len()).filter(|&j| self.levels[j] == min);
        match self.rule {
            TrisectRule::AllLongest => axes.collect(),
            TrisectRule::OneLongest => axes.take(1).collect(),
        }
    }
}

fn level_measure(levels: &[u8], kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::Euclidean => {
            let mut sorted: Vec<u8> = levels.to_vec();
            sorted.sort_unstable();
            0.5 * sorted
                .iter()
                .map(|&l| third_power(l).powi(2))
                .sum::<f64>()
                .sqrt()
        }
        MeasureKind::LongestSide => third_power(levels.iter().copied().min().unwrap_or(0)),
    }
}

impl Cell for HyperRect {
    fn measure(&self) -> f64 {
        self.delta
    }

    fn volume(&self) -> f64 {
        self.levels.iter().map(|&l| third_power(l)).product()
    }

    fn best(&self) -> (&[f64], Eval) {
        (&self.center, self.eval)
    }

    fn samples(&self) -> Vec<(&[f64], Eval)> {
        vec![(&self.center[..], self.eval)]
    }

    fn split_points(&self) -> Vec<Box<[f64]>> {
        let mut out = Vec::new();
        for j in self.split_axes() {
            let off = third_power(self.levels[j].saturating_add(1));
            for sign in [-1.0, 1.0] {
                let mut p = self.center.clone();
                p[j] += sign * off;
                out.push(p);
            }
        }
        out
    }

    /// Splits the chosen axes in increasing order of `min(rank(f-), rank(f+))`
    /// (ties by lower index), so the best values end up in the largest children.
    fn split(&self, values: &[Eval], rank: Rank<'_>) -> Vec<Self> {
        let axes = self.split_axes();
        debug_assert_eq!(values.len(), 2 * axes.len());
        let points = self.split_points();
        let mut order: Vec<usize> = (0..axes.len()).collect();
        let w: Vec<f64> = (0..axes.len())
            .map(|k| rank(&values[2 * k]).min(rank(&values[2 * k + 1])))
            .collect();
        order.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(axes[a].cmp(&axes[b])));

        let mut levels = self.levels.clone();
        let mut out = Vec::with_capacity(values.len() + 1);
        out.push(self.clone());
        for &k in &order {
            let j = axes[k];
            levels[j] = levels[j].saturating_add(1);
            for s in 0..2 {
                out.push(Self::from_parts(
                    points[2 * k + s].clone(),
                    levels.clone(),
                    values[2 * k + s],
                    self.kind,
                    self.rule,
                ));
            }
        }
        out[0] = Self::from_parts(self.center.clone(), levels, self.eval, self.kind, self.rule);
        out
    }

    fn contains(&self, u: &[f64]) -> bool {
        u.iter().enumerate().all(|(j, &v)| {
            let h = self.side(j) / 2.0;
            (v - self.center[j]).abs() <= h * (1.0 + 1e-12)
        })
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (self.lo(), self.hi())
    }
}
