//! Value transforms for explicitly and hidden constrained problems.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::Real;
use crate::partition::Eval;

/// Default feasibility tolerance on the violation sum.
pub const EPS_PHI: f64 = 1e-8;
/// Default uniform penalty weight of the exact penalty transform.
pub const L1_GAMMA: f64 = 1e3;

/// Exact penalty `f + sum max(gamma_i g_i, 0) + sum gamma_{m+i} |h_i|`.
///
/// `gamma` holds one weight per inequality followed by one per equality.
pub fn l1_value(f: f64, g: &[f64], h: &[f64], gamma: &[f64]) -> f64 {
    debug_assert_eq!(gamma.len(), g.len() + h.len());
    let m = g.len();
    f + g
        .iter()
        .zip(gamma)
        .map(|(gi, w)| (w * gi).max(0.0))
        .sum::<f64>()
        + h.iter()
            .zip(&gamma[m..])
            .map(|(hi, w)| w * hi.abs())
            .sum::<f64>()
}

/// Violation sum `sum max(g_i, 0) + sum |h_i|`.
pub fn phi(g: &[f64], h: &[f64]) -> f64 {
    g.iter().map(|v| v.max(0.0)).sum::<f64>() + h.iter().map(|v| v.abs()).sum::<f64>()
}

/// Whether points inside the adaptive violation band keep their plain value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlceMode {
    /// Every infeasible point is penalized.
    Glc,
    /// Infeasible points no worse than the best feasible value and within
    /// `eps_cons` are not penalized.
    Glce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlcePhase {
    /// Minimizing the violation sum until a feasible point appears.
    FindFeasible,
    /// Improving feasible solutions.
    Improve,
}

/// State of the two-phase constraint handler.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlceState {
    pub f_best_feas: f64,
    pub eps_phi: f64,
    pub eps_cons: f64,
    pub phase: GlcePhase,
    pub have_feasible: bool,
}

impl GlceState {
    pub fn new(eps_phi: f64) -> Self {
        GlceState {
            f_best_feas: f64::INFINITY,
            eps_phi,
            eps_cons: eps_phi,
            phase: GlcePhase::FindFeasible,
            have_feasible: false,
        }
    }
}

impl Default for GlceState {
    fn default() -> Self {
        Self::new(EPS_PHI)
    }
}

/// Penalized value used during the improvement phase.
pub fn glce_value(f: f64, phi_x: f64, state: &GlceState, mode: GlceMode) -> Result<f64> {
    if !state.have_feasible {
        return Err(Error::InvalidArgument(
            "the penalized value needs a feasible reference point".into(),
        ));
    }
    if phi_x <= state.eps_phi {
        return Ok(f);
    }
    if mode == GlceMode::Glce && f <= state.f_best_feas && phi_x <= state.eps_cons {
        return Ok(f);
    }
    Ok(f + phi_x + (f - state.f_best_feas).abs())
}

/// Updates the state from every sampled value; returns whether the best
/// feasible value changed.
///
/// `eps_cons` becomes the smallest violation among infeasible samples no
/// worse than the best feasible value, capped at `1e-2 (|f_best_feas| + 1)`
/// and never below `eps_phi`.
pub fn update_glce_state(
    state: &mut GlceState,
    samples: impl Iterator<Item = Eval> + Clone,
) -> bool {
    let previous = state.f_best_feas;
    for e in samples.clone() {
        if e.f.is_finite() && e.phi <= state.eps_phi && e.f < state.f_best_feas {
            state.f_best_feas = e.f;
        }
    }
    if state.f_best_feas.is_finite() {
        state.have_feasible = true;
        state.phase = GlcePhase::Improve;
        let cap = 1e-2 * (state.f_best_feas.abs() + 1.0);
        let band = samples
            .filter(|e| e.f.is_finite() && e.phi > state.eps_phi && e.f <= state.f_best_feas)
            .map(|e| e.phi)
            .fold(f64::INFINITY, f64::min);
        state.eps_cons = if band.is_finite() {
            state.eps_phi.max(band.min(cap))
        } else {
            state.eps_phi
        };
    }
    state.f_best_feas.to_bits() != previous.to_bits()
}

/// Strategy for points where the objective is undefined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HiddenHandler {
    /// A large constant.
    Barrier,
    /// A large constant, plus periodic subdivision of every infeasible element.
    SubBarrier,
    /// The best feasible value near the point, else the worst value seen.
    Nas,
    /// The incumbent value plus the distance to the incumbent.
    Glh,
}

/// Parameters of the hidden-constraint handlers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HiddenConfig {
    pub barrier_value: f64,
    pub nas_epsilon: f64,
    pub nas_lambda: f64,
    pub sub_base: u64,
}

impl Default for HiddenConfig {
    fn default() -> Self {
        HiddenConfig {
            barrier_value: 1e9,
            nas_epsilon: 1e-6,
            nas_lambda: 1.0,
            sub_base: 2,
        }
    }
}

/// What a handler needs to know about an infeasible point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HiddenContext {
    /// Best feasible value so far.
    pub f_best: Option<f64>,
    /// Distance from the point to the incumbent (unit coordinates).
    pub distance: f64,
    /// Smallest feasible value inside the point's neighborhood.
    pub neighbor_min: Option<f64>,
    /// Largest feasible value seen so far.
    pub f_max: f64,
}

/// Value assigned to a sample; `f` is `None` when the point is infeasible.
pub fn hidden_value(
    f: Option<f64>,
    handler: HiddenHandler,
    cfg: &HiddenConfig,
    ctx: &HiddenContext,
) -> f64 {
    if let Some(v) = f {
        return v;
    }
    match handler {
        HiddenHandler::Barrier | HiddenHandler::SubBarrier => cfg.barrier_value,
        HiddenHandler::Nas => match ctx.neighbor_min {
            Some(v) => v + cfg.nas_epsilon * v.abs(),
            None => ctx.f_max + cfg.nas_lambda,
        },
        HiddenHandler::Glh => match ctx.f_best {
            Some(b) => b + ctx.distance,
            None => 0.0,
        },
    }
}

/// Neighborhood box of an element: its sides doubled `doublings` times
/// about `center`, clipped to the unit cube.
pub fn nas_box(center: &[f64], lo: &[f64], hi: &[f64], doublings: u32) -> (Vec<f64>, Vec<f64>) {
    let scale = 2.0f64.powi(doublings as i32);
    let mut a = Vec::with_capacity(center.len());
    let mut b = Vec::with_capacity(center.len());
    for j in 0..center.len() {
        let half = 0.5 * (hi[j] - lo[j]) * scale;
        a.push((center[j] - half).max(0.0));
        b.push((center[j] + half).min(1.0));
    }
    (a, b)
}

/// Smallest feasible value near an element: its box is doubled about
/// `center` until it holds a point of `index` or covers the unit cube.
pub fn nas_neighbor_min(index: &NasIndex, center: &[f64], lo: &[f64], hi: &[f64]) -> Option<f64> {
    for doublings in 1..=64 {
        let (a, b) = nas_box(center, lo, hi, doublings);
        if let Some(v) = index.min_in(&a, &b) {
            return Some(v);
        }
        if a.iter().all(|v| *v <= 0.0) && b.iter().all(|v| *v >= 1.0) {
            return None;
        }
    }
    None
}

/// Feasible samples sorted by their first coordinate for box queries.
#[derive(Clone, Debug, Default)]
pub struct NasIndex {
    points: Vec<(Box<[f64]>, f64)>,
}

impl NasIndex {
    pub fn new(points: impl IntoIterator<Item = (Box<[f64]>, f64)>) -> Self {
        let mut points: Vec<(Box<[f64]>, f64)> = points.into_iter().collect();
        points.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.1.total_cmp(&b.1)));
        NasIndex { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest value among points inside the closed box `[lo, hi]`.
    pub fn min_in(&self, lo: &[f64], hi: &[f64]) -> Option<f64> {
        const SLACK: f64 = 1e-12;
        let start = self.points.partition_point(|p| p.0[0] < lo[0] - SLACK);
        self.points[start..]
            .iter()
            .take_while(|p| p.0[0] <= hi[0] + SLACK)
            .filter(|p| (1..lo.len()).all(|j| p.0[j] >= lo[j] - SLACK && p.0[j] <= hi[j] + SLACK))
            .map(|p| p.1)
            .reduce(f64::min)
    }
}

/// Whether iteration `k` (counted from 1) is a power `base^i`, `i >= 1`.
pub fn sub_step_due(k: u64, base: u64) -> bool {
    if base < 2 || k < base {
        return false;
    }
    let mut p = base;
    while p < k {
        match p.checked_mul(base) {
            Some(next) => p = next,
            None => return false,
        }
    }
    p == k
}
