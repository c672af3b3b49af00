//! Selection of potentially optimal elements.
//!
//! Selectors work on a *view* of the partition: either the group heads of a
//! [`PartitionStore`](crate::partition::PartitionStore) (smallest score of every
//! measure group), or a flat list of [`Candidate`]s when a strategy filters
//! individual elements first.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::Total;
use crate::partition::GroupHead;

/// Default balance parameter.
pub const DEFAULT_EPSILON: f64 = 1e-4;
/// Non-improving iterations after which the restart scheme raises epsilon.
pub const RESTART_PATIENCE: u32 = 5;
/// Epsilon used by the restart scheme while stagnating.
pub const RESTART_EPSILON: f64 = 0.01;
/// Level sequence of the multilevel scheme.
pub const W_CYCLE: [u8; 8] = [2, 1, 0, 1, 1, 0, 1, 2];
/// Refinements of the incumbent's element that trigger the global phase.
pub const GB_REFINEMENTS: u32 = 10;
/// Factor applied to the incumbent's measure to get the global-phase threshold.
pub const GB_FACTOR: f64 = 4.0;

/// Relative tolerance for hull collinearity and measure comparisons.
const TOL: f64 = 1e-12;

/// Ordered, duplicate-free list of element ids chosen for subdivision.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PohSet {
    ids: Vec<usize>,
}

impl PohSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `id` unless already present.
    pub fn push(&mut self, id: usize) {
        if !self.ids.contains(&id) {
            self.ids.push(id);
        }
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.ids.contains(&id)
    }

    /// Ids in ascending order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.ids.clone();
        v.sort_unstable();
        v
    }
}

impl FromIterator<usize> for PohSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PohSet::new();
        for id in iter {
            s.push(id);
        }
        s
    }
}

/// One element as seen by selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub id: usize,
    pub measure: f64,
    pub score: f64,
}

/// Reference value subtracted from the incumbent in the epsilon test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scaling {
    /// `eps * |f_best|`.
    #[default]
    None,
    /// `eps * |f_best - median|`.
    Median,
    /// `eps * |f_best - average|`.
    Average,
}

/// How many elements of a selected group are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PerGroup {
    /// Every element tying the group minimum.
    #[default]
    AllTies,
    /// Only the lowest id among the tied elements.
    OnePerGroup,
}

/// Parameter-free selectors built from group minima.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremeMode {
    /// The best element of every measure group.
    Aggressive,
    /// The potentially optimal elements of smallest and largest measure.
    Plor,
}

/// Which of the two enlarged sets a GL-type selector returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlMode {
    /// Best value per group.
    Global,
    /// Closest to the incumbent per group.
    Local,
    /// Union of both.
    Both,
}

/// Epsilon schedule that reacts to stagnation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestartState {
    pub epsilon: f64,
    pub stalled: u32,
}

impl Default for RestartState {
    fn default() -> Self {
        RestartState {
            epsilon: 0.0,
            stalled: 0,
        }
    }
}

/// Position in the W-cycle and the epsilon of each level (index = level).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelState {
    pub position: usize,
    pub epsilons: [f64; 3],
}

impl LevelState {
    pub fn new(epsilons: [f64; 3]) -> Self {
        LevelState {
            position: 0,
            epsilons,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GbPhase {
    #[default]
    Usual,
    Global,
}

/// Two-phase globally biased scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GbState {
    pub phase: GbPhase,
    /// Subdivisions of the incumbent's element since the last improvement.
    pub refinements: u32,
    /// Smallest measure visible during the global phase.
    pub threshold: f64,
    pub patience: u32,
    pub factor: f64,
}

impl Default for GbState {
    fn default() -> Self {
        GbState {
            phase: GbPhase::Usual,
            refinements: 0,
            threshold: 0.0,
            patience: GB_REFINEMENTS,
            factor: GB_FACTOR,
        }
    }
}

/// Per-run selection state.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionContext {
    pub epsilon: f64,
    /// Smallest score in the partition.
    pub f_best: f64,
    /// Representative point of the incumbent's element (unit coordinates).
    pub x_best: Vec<f64>,
    /// Group measure of the incumbent's element.
    pub incumbent_measure: f64,
    pub f_median: f64,
    pub f_average: f64,
    pub restart: RestartState,
    pub level: LevelState,
    pub gb: GbState,
}

impl SelectionContext {
    pub fn new(epsilon: f64) -> Self {
        SelectionContext {
            epsilon: epsilon.max(0.0),
            f_best: f64::INFINITY,
            x_best: Vec::new(),
            incumbent_measure: 0.0,
            f_median: 0.0,
            f_average: 0.0,
            restart: RestartState::default(),
            level: LevelState::new([epsilon; 3]),
            gb: GbState::default(),
        }
    }

    /// Sets the median and average statistics from every score.
    pub fn set_statistics(&mut self, scores: &mut [f64]) {
        if scores.is_empty() {
            return;
        }
        self.f_average = scores.iter().sum::<f64>() / scores.len() as f64;
        let mid = scores.len() / 2;
        let (_, upper, _) = scores.select_nth_unstable_by(mid, f64::total_cmp);
        let upper = *upper;
        self.f_median = if scores.len() % 2 == 1 {
            upper
        } else {
            let lower = scores[..mid]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            0.5 * (lower + upper)
        };
    }

    fn threshold(&self, scaling: Scaling) -> f64 {
        let reference = match scaling {
            Scaling::None => 0.0,
            Scaling::Median => self.f_median,
            Scaling::Average => self.f_average,
        };
        self.f_best - self.epsilon * (self.f_best - reference).abs()
    }
}

/// Group heads of a flat candidate list, ascending measure.
pub fn heads_of(cands: &[Candidate]) -> Vec<GroupHead> {
    let mut groups: BTreeMap<Total, Vec<(Total, usize)>> = BTreeMap::new();
    for c in cands {
        groups
            .entry(Total(c.measure))
            .or_default()
            .push((Total(c.score), c.id));
    }
    groups
        .into_iter()
        .map(|(m, mut v)| {
            v.sort_unstable();
            crate::partition::store_head(m.0, v.into_iter())
        })
        .collect()
}

fn take(head: &GroupHead, per_group: PerGroup, out: &mut PohSet) {
    match per_group {
        PerGroup::AllTies => head.ids.iter().for_each(|&id| out.push(id)),
        PerGroup::OnePerGroup => out.push(head.ids[0]),
    }
}

/// Index of the largest-measure head attaining the smallest score.
fn rightmost_minimum(heads: &[GroupHead]) -> usize {
    let mut best = 0;
    for (i, h) in heads.iter().enumerate() {
        if h.score <= heads[best].score {
            best = i;
        }
    }
    best
}

/// Lower-right convex hull of `(measure, score)` over `heads` (ascending
/// measure), starting at the rightmost global minimum. Collinear points are kept.
pub fn lower_right_hull(heads: &[GroupHead]) -> Vec<usize> {
    if heads.is_empty() {
        return Vec::new();
    }
    let start = rightmost_minimum(heads);
    let mut hull: Vec<usize> = Vec::new();
    for k in start..heads.len() {
        let (dc, fc) = (heads[k].measure, heads[k].score);
        while hull.len() >= 2 {
            let a = &heads[hull[hull.len() - 2]];
            let b = &heads[hull[hull.len() - 1]];
            // b lies strictly above segment a-c
            let lhs = (b.score - a.score) * (dc - a.measure);
            let rhs = (fc - a.score) * (b.measure - a.measure);
            if lhs - rhs > TOL * (lhs.abs() + rhs.abs()) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// Potentially optimal elements: hull points of the group minima that pass
/// the epsilon test against `ctx.f_best`.
pub fn select_convex_hull(
    heads: &[GroupHead],
    ctx: &SelectionContext,
    scaling: Scaling,
    per_group: PerGroup,
) -> PohSet {
    let hull = lower_right_hull(heads);
    let threshold = ctx.threshold(scaling);
    let mut out = PohSet::new();
    for (p, &k) in hull.iter().enumerate() {
        let h = &heads[k];
        let keep = match hull.get(p + 1) {
            None => true,
            Some(&next) => {
                let n = &heads[next];
                let slope = (n.score - h.score) / (n.measure - h.measure);
                h.score - slope * h.measure <= threshold
            }
        };
        if keep {
            take(h, per_group, &mut out);
        }
    }
    out
}

/// Aggressive or PLOR selection.
pub fn select_group_extremes(heads: &[GroupHead], mode: ExtremeMode) -> PohSet {
    let mut out = PohSet::new();
    if heads.is_empty() {
        return out;
    }
    match mode {
        ExtremeMode::Aggressive => heads
            .iter()
            .for_each(|h| take(h, PerGroup::AllTies, &mut out)),
        ExtremeMode::Plor => {
            take(
                &heads[rightmost_minimum(heads)],
                PerGroup::OnePerGroup,
                &mut out,
            );
            take(&heads[heads.len() - 1], PerGroup::OnePerGroup, &mut out);
        }
    }
    out
}

/// One element for GL-type selection, with its distance to the incumbent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlCandidate {
    pub id: usize,
    pub measure: f64,
    pub score: f64,
    pub distance: f64,
}

/// GL-type selection over every group with measure at least `min_measure`.
///
/// The global set takes the best score of each such group and the local set
/// the element nearest the incumbent; ties go to the lowest id. The result
/// is ordered by measure descending, then id.
pub fn select_gl(cands: &[GlCandidate], min_measure: f64, mode: GlMode) -> PohSet {
    let floor = min_measure * (1.0 - TOL);
    // Per measure: (best score, id) and (nearest distance, id).
    type Keyed = (Total, usize);
    let mut best: BTreeMap<Total, (Keyed, Keyed)> = BTreeMap::new();
    for c in cands.iter().filter(|c| c.measure >= floor) {
        let by_f = (Total(c.score), c.id);
        let by_d = (Total(c.distance), c.id);
        best.entry(Total(c.measure))
            .and_modify(|(f, d)| {
                *f = (*f).min(by_f);
                *d = (*d).min(by_d);
            })
            .or_insert((by_f, by_d));
    }
    let mut picked: Vec<(Total, usize)> = Vec::new();
    for (m, (f, d)) in &best {
        if mode != GlMode::Local {
            picked.push((*m, f.1));
        }
        if mode != GlMode::Global {
            picked.push((*m, d.1));
        }
    }
    picked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    picked.into_iter().map(|(_, id)| id).collect()
}

/// Advances the W-cycle and returns this iteration's level and epsilon.
pub fn level_step(state: &mut LevelState) -> (u8, f64) {
    let level = W_CYCLE[state.position % W_CYCLE.len()];
    state.position = (state.position + 1) % W_CYCLE.len();
    (level, state.epsilons[level as usize])
}

fn tenth(n: usize) -> usize {
    n.div_ceil(10)
}

/// Elements visible at `level`: all at level 2; at level 1 the worst tenth of
/// the largest elements is dropped; level 0 keeps the best tenth of level 1.
pub fn level_view(cands: &[Candidate], level: u8) -> Vec<Candidate> {
    if level >= 2 || cands.len() <= 1 {
        return cands.to_vec();
    }
    let mut order: Vec<Candidate> = cands.to_vec();
    order.sort_by(|a, b| {
        Total(b.measure)
            .cmp(&Total(a.measure))
            .then(Total(b.score).cmp(&Total(a.score)))
            .then(b.id.cmp(&a.id))
    });
    let drop = tenth(order.len()).min(order.len() - 1);
    let mut view: Vec<Candidate> = order.split_off(drop);
    if level == 1 {
        view.sort_by_key(|c| c.id);
        return view;
    }
    view.sort_by(|a, b| Total(a.score).cmp(&Total(b.score)).then(a.id.cmp(&b.id)));
    view.truncate(tenth(view.len()).max(1));
    view.sort_by_key(|c| c.id);
    view
}

/// Updates the restart schedule after an iteration and returns the new epsilon.
pub fn restart_epsilon_update(state: &mut RestartState, improved: bool) -> f64 {
    if improved {
        state.stalled = 0;
        state.epsilon = 0.0;
    } else {
        state.stalled = state.stalled.saturating_add(1);
        if state.stalled >= RESTART_PATIENCE {
            state.epsilon = RESTART_EPSILON;
        }
    }
    state.epsilon
}

impl GbState {
    /// Records the outcome of an iteration.
    pub fn update(&mut self, improved: bool, incumbent_refined: bool, incumbent_measure: f64) {
        if improved {
            self.phase = GbPhase::Usual;
            self.refinements = 0;
            return;
        }
        if incumbent_refined {
            self.refinements = self.refinements.saturating_add(1);
        }
        if self.phase == GbPhase::Usual && self.refinements >= self.patience {
            self.phase = GbPhase::Global;
            self.threshold = self.factor * incumbent_measure;
        }
    }
}

/// Restricts `heads` to large elements during the global phase. An empty
/// restriction ends the phase and leaves the view unchanged.
pub fn gb_filter(heads: Vec<GroupHead>, state: &mut GbState) -> Vec<GroupHead> {
    if state.phase == GbPhase::Usual {
        return heads;
    }
    let floor = state.threshold * (1.0 - TOL);
    if heads.iter().any(|h| h.measure >= floor) {
        heads.into_iter().filter(|h| h.measure >= floor).collect()
    } else {
        state.phase = GbPhase::Usual;
        state.refinements = 0;
        heads
    }
}

/// Discard rule for problems symmetric under coordinate permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymRule {
    /// Discard elements strictly outside the wedge `x1 <= x2 <= ... <= xn`.
    Strict,
    /// Also discard elements touching the wedge only on its boundary.
    Weak,
}

/// Whether the box `[lo, hi]` can be dropped for a permutation-symmetric problem.
pub fn symmetric_discard(lo: &[f64], hi: &[f64], rule: SymRule) -> bool {
    (0..lo.len().saturating_sub(1)).any(|j| {
        let slack = TOL.max(1e-12 * (hi[j + 1] - lo[j + 1]).abs());
        match rule {
            SymRule::Strict => lo[j] > hi[j + 1] + slack,
            SymRule::Weak => lo[j] >= hi[j + 1] - slack,
        }
    })
}

/// Heads of elements with measure at least `floor`, used by tests and callers
/// that precompute a threshold.
pub fn heads_above(heads: &[GroupHead], floor: f64) -> Vec<GroupHead> {
    heads
        .iter()
        .filter(|h| h.measure >= floor * (1.0 - TOL))
        .cloned()
        .collect()
}

/// A single-element view (the trivial first selection).
pub fn single(id: usize) -> PohSet {
    PohSet { ids: vec![id] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D1: f64 = 0.235_702_260_395_515_8;
    const D2: f64 = 0.175_682_092_231_396_8;
    const D3: f64 = 0.078_567_420_131_838_6;

    /// The 13-element rosenbrock partition after three DIRECT iterations
    /// (n = 2). Ids follow creation order: 158.5 is id 2, 168.5 id 5, 19.61 id 9.
    fn fig2() -> Vec<Candidate> {
        let raw = [
            (0, D1, 1408.5),
            (1, D1, 7658.5),
            (2, D3, 158.5),
            (3, D1, 1418.5),
            (4, D1, 288948.5),
            (5, D1, 168.5),
            (6, D1, 237698.5),
            (7, D1, 7668.5),
            (8, D1, 345198.5),
            (9, D2, 19.611_111_111_111_06),
            (10, D2, 852.944_444_444_444_1),
            (11, D3, 4_631.586_419_753_087),
            (12, D3, 9_734.179_012_345_7),
        ];
        raw.iter()
            .map(|&(id, measure, score)| Candidate { id, measure, score })
            .collect()
    }

    fn ctx_for(cands: &[Candidate], eps: f64) -> SelectionContext {
        let mut ctx = SelectionContext::new(eps);
        ctx.f_best = cands.iter().map(|c| c.score).fold(f64::INFINITY, f64::min);
        let mut s: Vec<f64> = cands.iter().map(|c| c.score).collect();
        ctx.set_statistics(&mut s);
        ctx
    }

    #[test]
    fn fig2_hull_and_extremes() {
        let c = fig2();
        let heads = heads_of(&c);
        assert_eq!(heads.len(), 3);
        let ctx = ctx_for(&c, 1e-4);
        let hull = select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies);
        assert_eq!(hull.sorted(), vec![5, 9]);
        let agg = select_group_extremes(&heads, ExtremeMode::Aggressive);
        assert_eq!(agg.sorted(), vec![2, 5, 9]);
        let plor = select_group_extremes(&heads, ExtremeMode::Plor);
        assert_eq!(plor.sorted(), vec![5, 9]);
    }

    #[test]
    fn single_element_and_single_group() {
        let c = [Candidate {
            id: 4,
            measure: 0.5,
            score: 3.0,
        }];
        let heads = heads_of(&c);
        let ctx = ctx_for(&c, 1e-4);
        assert_eq!(
            select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies).ids(),
            &[4]
        );
        let group: Vec<Candidate> = (0..4)
            .map(|i| Candidate {
                id: i,
                measure: 0.5,
                score: 4.0 - i as f64,
            })
            .collect();
        let heads = heads_of(&group);
        let a = select_group_extremes(&heads, ExtremeMode::Aggressive);
        let p = select_group_extremes(&heads, ExtremeMode::Plor);
        assert_eq!(a, p);
        assert_eq!(a.ids(), &[3]);
    }

    #[test]
    fn ties_follow_per_group_mode() {
        let c = [
            Candidate {
                id: 7,
                measure: 0.5,
                score: 1.0,
            },
            Candidate {
                id: 3,
                measure: 0.5,
                score: 1.0,
            },
            Candidate {
                id: 1,
                measure: 0.2,
                score: 2.0,
            },
        ];
        let heads = heads_of(&c);
        let ctx = ctx_for(&c, 0.0);
        let all = select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies);
        assert_eq!(all.sorted(), vec![3, 7]);
        let one = select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::OnePerGroup);
        assert_eq!(one.ids(), &[3]);
    }

    #[test]
    fn collinear_hull_points_are_kept() {
        let c: Vec<Candidate> = (1..=4)
            .map(|i| Candidate {
                id: i,
                measure: i as f64,
                score: i as f64,
            })
            .collect();
        let heads = heads_of(&c);
        assert_eq!(lower_right_hull(&heads), vec![0, 1, 2, 3]);
        let ctx = ctx_for(&c, 0.0);
        assert_eq!(
            select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies).len(),
            4
        );
    }

    #[test]
    fn epsilon_test_drops_small_hull_points() {
        // slope 1 from (1,1) to (2,2): intercept 0 must be <= 1 - eps*1
        let c = [
            Candidate {
                id: 0,
                measure: 1.0,
                score: 1.0,
            },
            Candidate {
                id: 1,
                measure: 2.0,
                score: 2.0,
            },
        ];
        let heads = heads_of(&c);
        let keep = ctx_for(&c, 0.5);
        assert_eq!(
            select_convex_hull(&heads, &keep, Scaling::None, PerGroup::AllTies).len(),
            2
        );
        let c2 = [
            Candidate {
                id: 0,
                measure: 1.0,
                score: 1.0,
            },
            Candidate {
                id: 1,
                measure: 2.0,
                score: 1.00001,
            },
        ];
        let heads = heads_of(&c2);
        let ctx = ctx_for(&c2, 1e-4);
        // intercept 0.99999 > 1 - 1e-4: only the largest element survives
        assert_eq!(
            select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies).ids(),
            &[1]
        );
    }

    #[test]
    fn gl_sets_on_fig2() {
        let t = 1.0 / 18.0;
        let centers: [[f64; 2]; 13] = [
            [0.5, 0.5],
            [0.5, 3.0 * t],
            [0.5, 15.0 * t],
            [3.0 * t, 0.5],
            [15.0 * t, 0.5],
            [3.0 * t, 15.0 * t],
            [15.0 * t, 15.0 * t],
            [3.0 * t, 3.0 * t],
            [15.0 * t, 3.0 * t],
            [0.5, 13.0 * t],
            [0.5, 17.0 * t],
            [7.0 * t, 15.0 * t],
            [11.0 * t, 15.0 * t],
        ];
        let xb = centers[9];
        let gl: Vec<GlCandidate> = fig2()
            .iter()
            .map(|c| GlCandidate {
                id: c.id,
                measure: c.measure,
                score: c.score,
                distance: crate::math::distance(&centers[c.id], &xb),
            })
            .collect();
        let g = select_gl(&gl, D2, GlMode::Global);
        assert_eq!(g.ids(), &[5, 9]);
        let l = select_gl(&gl, D2, GlMode::Local);
        // the root center is the D1 element nearest the incumbent
        assert_eq!(l.ids(), &[0, 9]);
        let both = select_gl(&gl, D2, GlMode::Both);
        assert_eq!(both.ids(), &[0, 5, 9]);
    }

    #[test]
    fn gl_single_group() {
        let gl = [
            GlCandidate {
                id: 0,
                measure: 1.0,
                score: 5.0,
                distance: 0.0,
            },
            GlCandidate {
                id: 1,
                measure: 1.0,
                score: 3.0,
                distance: 0.4,
            },
        ];
        assert_eq!(select_gl(&gl, 1.0, GlMode::Global).ids(), &[1]);
        assert_eq!(select_gl(&gl, 1.0, GlMode::Local).ids(), &[0]);
        assert_eq!(select_gl(&gl, 1.0, GlMode::Both).ids(), &[0, 1]);
    }

    #[test]
    fn w_cycle_sequence_and_epsilons() {
        let mut s = LevelState::new([1e-5, 1e-7, 0.0]);
        let seq: Vec<u8> = (0..16).map(|_| level_step(&mut s).0).collect();
        assert_eq!(&seq[..8], &[2, 1, 0, 1, 1, 0, 1, 2]);
        assert_eq!(&seq[..8], &seq[8..]);
        let mut s = LevelState::new([1e-5, 1e-7, 0.0]);
        level_step(&mut s);
        level_step(&mut s);
        assert_eq!(level_step(&mut s), (0, 1e-5));
    }

    #[test]
    fn level_views() {
        let group: Vec<Candidate> = (0..10)
            .map(|i| Candidate {
                id: i,
                measure: 0.5,
                score: i as f64,
            })
            .collect();
        let l1 = level_view(&group, 1);
        assert_eq!(l1.len(), 9);
        assert!(l1.iter().all(|c| c.id != 9));
        let l0 = level_view(&group, 0);
        assert_eq!(l0.len(), 1);
        assert_eq!(l0[0].id, 0);
        assert_eq!(level_view(&group, 2).len(), 10);
        let one = [Candidate {
            id: 3,
            measure: 1.0,
            score: 0.0,
        }];
        assert_eq!(level_view(&one, 0).len(), 1);
    }

    #[test]
    fn restart_schedule() {
        let mut s = RestartState::default();
        for _ in 0..4 {
            assert_eq!(restart_epsilon_update(&mut s, false), 0.0);
        }
        assert_eq!(restart_epsilon_update(&mut s, false), 0.01);
        assert_eq!(restart_epsilon_update(&mut s, false), 0.01);
        assert_eq!(restart_epsilon_update(&mut s, true), 0.0);
        assert_eq!(s.stalled, 0);
    }

    #[test]
    fn gb_phases() {
        let heads = heads_of(&fig2());
        let mut st = GbState::default();
        assert_eq!(gb_filter(heads.clone(), &mut st), heads);
        st.phase = GbPhase::Global;
        st.threshold = 0.2;
        let view = gb_filter(heads.clone(), &mut st);
        assert_eq!(view.len(), 1);
        assert!((view[0].measure - D1).abs() < 1e-15);
        st.update(true, false, D2);
        assert_eq!(st.phase, GbPhase::Usual);
        assert_eq!(gb_filter(heads.clone(), &mut st), heads);

        let mut st = GbState::default();
        for _ in 0..GB_REFINEMENTS {
            st.update(false, true, 0.01);
        }
        assert_eq!(st.phase, GbPhase::Global);
        assert!((st.threshold - 0.04).abs() < 1e-15);
        st.threshold = 10.0;
        assert_eq!(gb_filter(heads.clone(), &mut st).len(), 3);
        assert_eq!(st.phase, GbPhase::Usual);
    }

    #[test]
    fn symmetric_wedge() {
        let t = 1.0 / 3.0;
        assert!(!symmetric_discard(
            &[0.0, 2.0 * t],
            &[t, 1.0],
            SymRule::Strict
        ));
        assert!(symmetric_discard(
            &[2.0 * t, 0.0],
            &[1.0, t],
            SymRule::Strict
        ));
        assert!(!symmetric_discard(
            &[0.0, 0.0],
            &[1.0, 1.0],
            SymRule::Strict
        ));
        // touches the diagonal only at a corner
        assert!(!symmetric_discard(
            &[t, 0.0],
            &[2.0 * t, t],
            SymRule::Strict
        ));
        assert!(symmetric_discard(&[t, 0.0], &[2.0 * t, t], SymRule::Weak));
        assert!(!symmetric_discard(&[0.0, 0.0], &[1.0, 1.0], SymRule::Weak));
    }

    #[test]
    fn statistics() {
        let mut ctx = SelectionContext::new(0.0);
        ctx.set_statistics(&mut [4.0, 1.0, 3.0, 2.0]);
        assert_eq!(ctx.f_median, 2.5);
        assert_eq!(ctx.f_average, 2.5);
        ctx.set_statistics(&mut [5.0, 1.0, 3.0]);
        assert_eq!(ctx.f_median, 3.0);
    }

    /// Brute force: `j` is potentially optimal iff some positive constant from
    /// the enumerated slopes (pairwise, epsilon-test slopes, their midpoints
    /// and one beyond the largest) satisfies every inequality.
    fn oracle(cands: &[Candidate], threshold: f64) -> Vec<usize> {
        let mut slopes: Vec<f64> = Vec::new();
        for a in cands {
            for b in cands {
                if b.measure > a.measure {
                    slopes.push((b.score - a.score) / (b.measure - a.measure));
                }
            }
            slopes.push((a.score - threshold) / a.measure);
        }
        slopes.retain(|s| *s > 0.0);
        slopes.sort_by(f64::total_cmp);
        let mut trial = slopes.clone();
        for w in slopes.windows(2) {
            trial.push(0.5 * (w[0] + w[1]));
        }
        let top = slopes.last().copied().unwrap_or(1.0);
        trial.push(2.0 * top + 1.0);
        if let Some(&s) = slopes.first() {
            trial.push(0.5 * s);
        }
        let tol = 1e-9;
        let mut out: Vec<usize> = cands
            .iter()
            .filter(|j| {
                trial.iter().any(|&l| {
                    let lhs = j.score - l * j.measure;
                    lhs <= threshold + tol
                        && cands.iter().all(|i| lhs <= i.score - l * i.measure + tol)
                })
            })
            .map(|j| j.id)
            .collect();
        out.sort_unstable();
        out
    }

    fn partition(max: usize) -> impl Strategy<Value = Vec<Candidate>> {
        let measures = [0.05, 0.11, 0.2, 0.31, 0.47];
        prop::collection::vec((0..5usize, -1.0..1.0f64), 1..=max).prop_map(move |v| {
            v.into_iter()
                .enumerate()
                .map(|(id, (g, s))| Candidate {
                    id,
                    measure: measures[g],
                    score: s,
                })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn hull_matches_slope_oracle(c in partition(30), eps in prop_oneof![Just(0.0), Just(1e-4), Just(0.1)]) {
            let heads = heads_of(&c);
            let ctx = ctx_for(&c, eps);
            let got = select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies).sorted();
            prop_assert_eq!(got, oracle(&c, ctx.threshold(Scaling::None)));
        }

        #[test]
        fn zero_epsilon_is_affine_invariant(c in partition(30), a in 0.1..50.0f64, b in -100.0..100.0f64) {
            let heads = heads_of(&c);
            let ctx = ctx_for(&c, 0.0);
            let base = select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies).sorted();
            let moved: Vec<Candidate> = c.iter().map(|x| Candidate { score: a * x.score + b, ..*x }).collect();
            let ctx2 = ctx_for(&moved, 0.0);
            let got = select_convex_hull(&heads_of(&moved), &ctx2, Scaling::None, PerGroup::AllTies).sorted();
            prop_assert_eq!(base, got);
        }

        #[test]
        fn median_scaling_is_shift_invariant(c in partition(30), eps in 1e-4..0.2f64) {
            let ctx = ctx_for(&c, eps);
            let base = select_convex_hull(&heads_of(&c), &ctx, Scaling::Median, PerGroup::AllTies).sorted();
            let moved: Vec<Candidate> = c.iter().map(|x| Candidate { score: x.score + 1000.0, ..*x }).collect();
            let ctx2 = ctx_for(&moved, eps);
            let got = select_convex_hull(&heads_of(&moved), &ctx2, Scaling::Median, PerGroup::AllTies).sorted();
            prop_assert_eq!(base, got);
        }

        #[test]
        fn aggressive_contains_hull(c in partition(30)) {
            let heads = heads_of(&c);
            let ctx = ctx_for(&c, 0.0);
            let hull = select_convex_hull(&heads, &ctx, Scaling::None, PerGroup::AllTies);
            let agg = select_group_extremes(&heads, ExtremeMode::Aggressive);
            prop_assert!(hull.ids().iter().all(|id| agg.contains(*id)));
        }

        #[test]
        fn plor_has_at_most_two(c in partition(30)) {
            let heads = heads_of(&c);
            let p = select_group_extremes(&heads, ExtremeMode::Plor);
            prop_assert!(!p.is_empty() && p.len() <= 2);
            if heads.len() == 1 {
                prop_assert_eq!(p.len(), 1);
            }
            let ids: Vec<usize> = c.iter().map(|x| x.id).collect();
            prop_assert!(p.ids().iter().all(|id| ids.contains(id)));
        }
    }
}
