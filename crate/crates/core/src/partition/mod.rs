//! Partitions of the unit cube into hyper-rectangles or simplices.
//!
//! Every algorithm works on the domain mapped to `[0, 1]^n`. A partition is a
//! set of [`Cell`]s held by a [`PartitionStore`]; each cell carries its
//! sampled values and a cached measure used for grouping.

mod cover;
mod diag;
mod rect;
mod simplex;
mod store;

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::math::Real;
use crate::problem::ProblemSpec;

pub use cover::feasible_cover_simplices;
pub use diag::{DiagRect, DiagonalSampling};
pub use rect::{HyperRect, TrisectRule};
pub use simplex::{initial_simplices, SimplexCell, SimplexSampling, MAX_SIMPLEX_DIM};
pub(crate) use store::head as store_head;
pub use store::{GroupHead, GroupInfo, PartitionStore, StorageKind};

/// Size measure of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MeasureKind {
    /// Half the Euclidean diagonal (half the longest edge for simplices).
    #[default]
    Euclidean,
    /// Length of the longest side.
    LongestSide,
}

/// Affine map between the problem box and the unit cube.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitMap {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl UnitMap {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// `lower + u * (upper - lower)`, clamped to the box so rounding never leaves it.
    pub fn to_original(&self, u: &[f64]) -> Vec<f64> {
        let mut x = Vec::with_capacity(u.len());
        self.to_original_into(u, &mut x);
        x
    }

    pub fn to_original_into(&self, u: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(
            u.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .map(|(&t, (&lo, &hi))| (lo + t * (hi - lo)).clamp(lo, hi)),
        );
    }

    pub fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&lo, &hi))| (v - lo) / (hi - lo))
            .collect()
    }
}

/// Builds the unit-cube map of a problem's box.
pub fn normalize_domain(spec: &ProblemSpec) -> UnitMap {
    UnitMap {
        lower: spec.lower.clone(),
        upper: spec.upper.clone(),
    }
}

/// Measure of the box `[lo, hi]`.
pub fn measure(lo: &[f64], hi: &[f64], kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::Euclidean => {
            0.5 * lo
                .iter()
                .zip(hi)
                .map(|(a, b)| (b - a) * (b - a))
                .sum::<f64>()
                .sqrt()
        }
        MeasureKind::LongestSide => lo.iter().zip(hi).fold(0.0, |m, (a, b)| m.max(b - a)),
    }
}

/// Values observed at one sample point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eval {
    /// Objective value; `f64::INFINITY` marks a failed or hidden-infeasible evaluation.
    pub f: f64,
    /// Total constraint violation (zero for box problems).
    pub phi: f64,
}

impl Eval {
    pub fn new(f: f64, phi: f64) -> Self {
        Eval { f, phi }
    }

    /// A value without constraint information.
    pub fn plain(f: f64) -> Self {
        Eval { f, phi: 0.0 }
    }

    /// The objective could not be evaluated at this point.
    pub fn failed(&self) -> bool {
        !self.f.is_finite()
    }
}

/// Ranking used to order sample values during subdivision (lower is better).
pub type Rank<'a> = &'a (dyn Fn(&Eval) -> f64 + Sync);

/// A partition element together with its sampled values.
pub trait Cell: Clone + Send + Sync {
    /// Cached measure used for grouping.
    fn measure(&self) -> f64;

    /// Lebesgue measure of the cell.
    fn volume(&self) -> f64;

    /// The sample that represents the cell: its point and value.
    fn best(&self) -> (&[f64], Eval);

    /// Every sample the cell owns.
    fn samples(&self) -> Vec<(&[f64], Eval)>;

    /// Points that subdividing this cell needs evaluated, in a fixed order.
    fn split_points(&self) -> Vec<Box<[f64]>>;

    /// Children of the cell given the values at [`Cell::split_points`].
    ///
    /// The first child takes over the parent's identity; the remaining ones
    /// are new elements in the returned order.
    fn split(&self, values: &[Eval], rank: Rank<'_>) -> Vec<Self>;

    /// Whether `u` lies in the closed cell (up to a small tolerance).
    fn contains(&self, u: &[f64]) -> bool;

    /// Axis-aligned bounding box.
    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>);
}
