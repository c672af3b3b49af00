//! The iteration loop shared by every catalog entry.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::catalog::{strategy, Family, Handler, Hybrid, Partitioning, Selector, Strategy};
use super::exec::{Clock, Executor, ParallelPlan};
use super::local::{inequality_values, minimize, LocalPoint};
use super::{should_stop, RunConfig, RunResult, Status, TraceRecord};
use crate::constraints::{
    glce_value, hidden_value, nas_neighbor_min, sub_step_due, update_glce_state, GlcePhase,
    GlceState, HiddenConfig, HiddenContext, HiddenHandler, NasIndex, L1_GAMMA,
};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::math::{distance, Real};
use crate::partition::{
    feasible_cover_simplices, initial_simplices, normalize_domain, Cell, DiagRect, Eval, GroupHead,
    HyperRect, PartitionStore, SimplexCell, SimplexSampling, UnitMap,
};
use crate::problem::{hidden_feasibility, transform_equalities, ProblemSpec, EPS_H};
use crate::selection::{
    gb_filter, heads_of, level_step, level_view, restart_epsilon_update, select_convex_hull,
    select_gl, select_group_extremes, symmetric_discard, Candidate, ExtremeMode, GlCandidate,
    PerGroup, PohSet, Scaling, SelectionContext, SymRule,
};

/// Score given to failed samples before any finite value exists.
const NO_VALUE: f64 = 1e300;
/// Elements below this measure (unit cube) are retired instead of stored.
const MIN_MEASURE: f64 = 1e-13;
/// Evaluation budget per dimension for local searches started on improvement.
const LOCAL_BUDGET: usize = 1000;
/// Evaluation budget per dimension for local searches started from every selected element.
const POH_LOCAL_BUDGET: usize = 100;

/// Runs `cfg.algorithm` on `spec` with the given executor and clock.
pub fn solve_with<E: Executor>(
    spec: &ProblemSpec,
    cfg: &RunConfig,
    exec: &E,
    clock: &dyn Clock,
) -> Result<RunResult> {
    let strat = strategy(&cfg.algorithm)?;
    validate(cfg)?;
    let class = spec.class();
    if !strat.family.accepts(class) {
        return Err(Error::IncompatibleClass {
            algorithm: strat.id.into(),
            problem: spec.name.clone(),
            class: class.as_str(),
        });
    }
    let work = match strat.family {
        Family::General if !spec.equalities.is_empty() => transform_equalities(spec, EPS_H),
        Family::Hidden if spec.is_constrained() => hidden_feasibility(spec, EPS_H),
        _ => spec.clone(),
    };
    let n = work.dim();
    match strat.partitioning {
        Partitioning::Trisect(rule) => {
            let mut e: Engine<'_, HyperRect, E> =
                Engine::new(&work, cfg, strat, exec, clock, false);
            let center = HyperRect::unit_center(n).into_boxed_slice();
            let v = e.evaluate_initial(vec![center])?;
            e.insert(HyperRect::unit(n, v[0], strat.measure, rule));
            e.run()
        }
        Partitioning::Bisect(sampling) => {
            let mut e: Engine<'_, DiagRect, E> = Engine::new(&work, cfg, strat, exec, clock, true);
            let [a, b] = DiagRect::initial_points(n, sampling);
            let v = e.evaluate_initial(vec![a.into_boxed_slice(), b.into_boxed_slice()])?;
            e.insert(DiagRect::unit(n, sampling, v[0], v[1], strat.measure));
            e.run()
        }
        Partitioning::Simplex(sampling) | Partitioning::FeasibleSimplex(sampling) => {
            let simplices = if matches!(strat.partitioning, Partitioning::Simplex(_)) {
                initial_simplices(n)?
            } else {
                feasible_cover_simplices(&work)?
            };
            let cache = sampling == SimplexSampling::Vertices;
            let mut e: Engine<'_, SimplexCell, E> =
                Engine::new(&work, cfg, strat, exec, clock, cache);
            let points: Vec<Vec<Vec<f64>>> = simplices
                .iter()
                .map(|s| SimplexCell::sample_points(s, sampling))
                .collect();
            let flat: Vec<Box<[f64]>> = points
                .iter()
                .flatten()
                .map(|p| p.clone().into_boxed_slice())
                .collect();
            let values = e.evaluate_initial(flat)?;
            let mut k = 0;
            for (s, p) in simplices.iter().zip(&points) {
                e.insert(SimplexCell::new(s, sampling, &values[k..k + p.len()]));
                k += p.len();
            }
            e.run()
        }
    }
}

fn validate(cfg: &RunConfig) -> Result<()> {
    let bad = |what: &str, v: f64| {
        Err(Error::InvalidArgument(format!(
            "{what} must be finite and non-negative, got {v}"
        )))
    };
    if let Some(eps) = cfg.epsilon {
        if !(eps.is_finite() && eps >= 0.0) {
            return bad("epsilon", eps);
        }
    }
    if !(cfg.eps_pe.is_finite() && cfg.eps_pe >= 0.0) {
        return bad("eps_pe", cfg.eps_pe);
    }
    if !(cfg.eps_phi.is_finite() && cfg.eps_phi >= 0.0) {
        return bad("eps_phi", cfg.eps_phi);
    }
    if let Some(t) = cfg.max_time {
        if t.is_nan() || t < 0.0 {
            return bad("max_time", t);
        }
    }
    if cfg.workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    Ok(())
}

fn evaluate(spec: &ProblemSpec, map: &UnitMap, u: &[f64]) -> Eval {
    let x = map.to_original(u);
    let f = spec.objective_unchecked(&x);
    let phi = if spec.is_constrained() {
        spec.violation_unchecked(&x)
    } else {
        0.0
    };
    Eval::new(f, phi)
}

fn cache_key(u: &[f64]) -> Box<[i64]> {
    const SCALE: f64 = (1u64 << 44) as f64;
    u.iter().map(|v| (v * SCALE).round() as i64).collect()
}

/// Converts sample values into element scores; copied into workers to rank
/// split directions.
#[derive(Clone, Copy)]
struct Scorer {
    handler: Handler,
    fallback: f64,
    glce: GlceState,
    hidden: HiddenConfig,
    f_best: Option<f64>,
    f_max: f64,
}

impl Scorer {
    fn score(&self, e: &Eval, distance: f64, neighbor_min: Option<f64>) -> f64 {
        let v = match self.handler {
            Handler::Hidden(h) => hidden_value(
                (!e.failed()).then_some(e.f),
                h,
                &self.hidden,
                &HiddenContext {
                    f_best: self.f_best,
                    distance,
                    neighbor_min,
                    f_max: self.f_max,
                },
            ),
            _ if e.failed() => self.fallback,
            Handler::Plain => e.f,
            Handler::L1 => e.f + L1_GAMMA * e.phi,
            Handler::Glce(mode) => match self.glce.phase {
                GlcePhase::FindFeasible => e.phi,
                GlcePhase::Improve => {
                    glce_value(e.f, e.phi, &self.glce, mode).unwrap_or(f64::INFINITY)
                }
            },
        };
        if v.is_finite() {
            v
        } else {
            self.fallback
        }
    }

    fn rank(&self, e: &Eval) -> f64 {
        self.score(e, 0.0, None)
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Known(Eval),
    Fresh(usize),
}

struct Engine<'a, C: Cell, E: Executor> {
    spec: &'a ProblemSpec,
    map: UnitMap,
    cfg: &'a RunConfig,
    strat: Strategy,
    symmetry: Option<SymRule>,
    exec: &'a E,
    clock: &'a dyn Clock,
    t0: f64,
    store: PartitionStore<C>,
    ctx: SelectionContext,
    cache: Option<BTreeMap<Box<[i64]>, Eval>>,
    evals: usize,
    iters: usize,
    f_max: f64,
    /// Best feasible value and its unit-cube point.
    incumbent: Option<(f64, Vec<f64>)>,
    /// Best feasible point found by local searches.
    local_best: Option<(f64, Vec<f64>)>,
    local_starts: BTreeSet<Box<[i64]>>,
    glce: GlceState,
    /// Every sample, kept only for the two-phase handler.
    history: Vec<Eval>,
    /// Elements whose representative sample failed.
    failed: BTreeSet<usize>,
    /// Inputs the failed elements were last scored with.
    failed_scored_with: Option<(u64, Option<u64>)>,
    trace: Vec<TraceRecord>,
}

impl<'a, C: Cell, E: Executor> Engine<'a, C, E> {
    fn new(
        spec: &'a ProblemSpec,
        cfg: &'a RunConfig,
        strat: Strategy,
        exec: &'a E,
        clock: &'a dyn Clock,
        cache: bool,
    ) -> Self {
        let epsilon = cfg.epsilon.unwrap_or(strat.epsilon);
        let mut ctx = SelectionContext::new(if strat.restart { 0.0 } else { epsilon });
        if let Selector::MultiLevel(levels) = strat.selector {
            ctx.level.epsilons = cfg.epsilon.map_or(levels, |e| [e; 3]);
        }
        Engine {
            spec,
            map: normalize_domain(spec),
            cfg,
            strat,
            symmetry: strat.symmetry.filter(|_| spec.symmetric),
            exec,
            clock,
            t0: clock.elapsed(),
            store: PartitionStore::new(cfg.storage).with_global_order(),
            ctx,
            cache: cache.then(BTreeMap::new),
            evals: 0,
            iters: 0,
            f_max: f64::NEG_INFINITY,
            incumbent: None,
            local_best: None,
            local_starts: BTreeSet::new(),
            glce: GlceState::new(cfg.eps_phi),
            history: Vec::new(),
            failed: BTreeSet::new(),
            failed_scored_with: None,
            trace: Vec::new(),
        }
    }

    fn elapsed(&self) -> f64 {
        self.clock.elapsed() - self.t0
    }

    fn scorer(&self) -> Scorer {
        Scorer {
            handler: self.strat.handler,
            fallback: if self.f_max.is_finite() {
                self.f_max + 1.0
            } else {
                NO_VALUE
            },
            glce: self.glce,
            hidden: self.cfg.hidden,
            f_best: self.incumbent.as_ref().map(|i| i.0),
            f_max: self.f_max,
        }
    }

    fn incumbent_f(&self) -> f64 {
        self.incumbent.as_ref().map_or(f64::INFINITY, |i| i.0)
    }

    /// Score of a cell at insertion time.
    fn score_cell(&self, scorer: &Scorer, cell: &C) -> f64 {
        let (u, e) = cell.best();
        let d = match (&self.incumbent, self.strat.handler) {
            (Some((_, x)), Handler::Hidden(HiddenHandler::Glh)) if e.failed() => distance(u, x),
            _ => 0.0,
        };
        scorer.score(&e, d, None)
    }

    fn insert(&mut self, cell: C) {
        let score = self.score_cell(&self.scorer(), &cell);
        let failed = cell.best().1.failed();
        let id = self.store.insert(cell, score);
        if failed {
            self.failed.insert(id);
        }
    }

    fn record(&mut self, u: &[f64], e: Eval) {
        if e.f.is_finite() {
            self.f_max = self.f_max.max(e.f);
            if e.phi <= self.cfg.eps_phi && e.f < self.incumbent_f() {
                self.incumbent = Some((e.f, u.to_vec()));
            }
        }
        if matches!(self.strat.handler, Handler::Glce(_)) {
            self.history.push(e);
        }
    }

    fn evaluate_initial(&mut self, points: Vec<Box<[f64]>>) -> Result<Vec<Eval>> {
        let counts = vec![1; points.len()];
        let plan = ParallelPlan::balanced(points.len(), self.exec.workers());
        self.evaluate_grouped(points, &counts, &plan)
    }

    /// Evaluates points grouped per owner (`counts[k]` points for owner `k`);
    /// each worker evaluates the fresh points of the owners in its share.
    fn evaluate_grouped(
        &mut self,
        points: Vec<Box<[f64]>>,
        counts: &[usize],
        plan: &ParallelPlan,
    ) -> Result<Vec<Eval>> {
        let mut slots = Vec::with_capacity(points.len());
        let mut fresh: Vec<Box<[f64]>> = Vec::new();
        let mut batch: BTreeMap<Box<[i64]>, usize> = BTreeMap::new();
        let mut first_fresh = Vec::with_capacity(counts.len() + 1);
        let mut it = points.into_iter();
        for &c in counts {
            first_fresh.push(fresh.len());
            for p in it.by_ref().take(c) {
                let slot = match &self.cache {
                    Some(cache) => {
                        let key = cache_key(&p);
                        if let Some(e) = cache.get(&key) {
                            Slot::Known(*e)
                        } else if let Some(&k) = batch.get(&key) {
                            Slot::Fresh(k)
                        } else {
                            batch.insert(key, fresh.len());
                            fresh.push(p);
                            Slot::Fresh(fresh.len() - 1)
                        }
                    }
                    None => {
                        fresh.push(p);
                        Slot::Fresh(fresh.len() - 1)
                    }
                };
                slots.push(slot);
            }
        }
        first_fresh.push(fresh.len());

        let (spec, map) = (self.spec, &self.map);
        let pts = &fresh;
        let bounds = &first_fresh;
        let parts = self.exec.execute(plan, &|r| {
            pts[bounds[r.start]..bounds[r.end]]
                .iter()
                .map(|u| evaluate(spec, map, u))
                .collect::<Vec<Eval>>()
        })?;
        let values: Vec<Eval> = parts.into_iter().flatten().collect();
        debug_assert_eq!(values.len(), fresh.len());
        self.evals += fresh.len();
        for (u, e) in fresh.iter().zip(&values) {
            self.record(u, *e);
            if let Some(cache) = self.cache.as_mut() {
                cache.insert(cache_key(u), *e);
            }
        }
        Ok(slots
            .into_iter()
            .map(|s| match s {
                Slot::Known(e) => e,
                Slot::Fresh(k) => values[k],
            })
            .collect())
    }

    fn run(mut self) -> Result<RunResult> {
        let fstar = self.spec.fstar();
        let status = loop {
            if fstar.is_some_and(|fs| should_stop(self.incumbent_f(), fs, self.cfg.eps_pe)) {
                break Status::Solved;
            }
            if self.evals >= self.cfg.max_evals {
                break Status::BudgetExceeded;
            }
            if self.cfg.max_time.is_some_and(|t| self.elapsed() >= t) {
                break Status::TimeExceeded;
            }
            if self.cfg.max_iters.is_some_and(|k| self.iters >= k) {
                break Status::IterCapped;
            }
            if self.store.is_empty() {
                // every element was retired: nothing left to sample
                break Status::BudgetExceeded;
            }
            self.iterate()?;
        };
        let (f_min, u) = match self.incumbent.take() {
            Some((f, u)) => (f, u),
            None => {
                let u = self
                    .store
                    .best()
                    .and_then(|(id, _)| self.store.get(id))
                    .map_or_else(|| vec![0.5; self.spec.dim()], |c| c.best().0.to_vec());
                (f64::INFINITY, u)
            }
        };
        Ok(RunResult {
            f_min,
            x_min: self.map.to_original(&u),
            evals: self.evals,
            iters: self.iters,
            elapsed: self.elapsed(),
            status,
            trace: self.trace,
        })
    }

    fn iterate(&mut self) -> Result<()> {
        let before = self.incumbent_f();
        self.refresh_scores();
        self.update_context();
        let mut poh = self.select();
        if self.strat.handler == Handler::Hidden(HiddenHandler::SubBarrier)
            && sub_step_due(self.iters as u64 + 1, self.cfg.hidden.sub_base)
        {
            for &id in &self.failed {
                poh.push(id);
            }
        }
        let incumbent_id = self.store.best().map(|b| b.0);
        let refined = incumbent_id.is_some_and(|id| poh.contains(id));
        let starts: Vec<(Vec<f64>, Eval)> = if self.strat.hybrid == Hybrid::EveryPoh {
            poh.ids()
                .iter()
                .filter_map(|&id| self.store.get(id))
                .map(|c| (c.best().0.to_vec(), c.best().1))
                .collect()
        } else {
            Vec::new()
        };

        self.subdivide(&poh)?;
        self.iters += 1;

        let n = self.spec.dim();
        match self.strat.hybrid {
            Hybrid::None => {}
            Hybrid::OnImprovement => {
                if self.incumbent_f() < before {
                    if let Some((f, u)) = self.incumbent.clone() {
                        self.local_from(&u, f, LOCAL_BUDGET * n);
                    }
                }
            }
            Hybrid::EveryPoh => {
                for (u, e) in starts {
                    if !e.failed() && self.local_starts.insert(cache_key(&u)) {
                        self.local_from(&u, e.f, POH_LOCAL_BUDGET * n);
                    }
                }
            }
        }

        let improved = self.incumbent_f() < before;
        if self.strat.restart {
            self.ctx.epsilon = restart_epsilon_update(&mut self.ctx.restart, improved);
        }
        if self.strat.globally_biased {
            let measure = self
                .store
                .best()
                .and_then(|(id, _)| self.store.group_of(id))
                .unwrap_or(0.0);
            self.ctx.gb.update(improved, refined, measure);
        }
        self.trace.push(TraceRecord {
            iteration: self.iters,
            evals: self.evals,
            f_min: self.incumbent_f(),
            elapsed: self.elapsed(),
        });
        Ok(())
    }

    fn rescore_failed(&mut self, neighbors: Option<&NasIndex>) {
        let scorer = self.scorer();
        let ids: Vec<usize> = self.failed.iter().copied().collect();
        for id in ids {
            let Some(cell) = self.store.get(id) else {
                continue;
            };
            let s = match neighbors {
                Some(index) => {
                    let (u, e) = cell.best();
                    let (lo, hi) = cell.bounding_box();
                    scorer.score(&e, 0.0, nas_neighbor_min(index, u, &lo, &hi))
                }
                None => self.score_cell(&scorer, cell),
            };
            self.store.rescore(id, s);
        }
    }

    /// Brings scores up to date with the handler state.
    fn refresh_scores(&mut self) {
        match self.strat.handler {
            Handler::Glce(_) => {
                let previous = self.glce;
                update_glce_state(&mut self.glce, self.history.iter().copied());
                if self.glce != previous {
                    let scorer = self.scorer();
                    let ids: Vec<usize> = self.store.iter().map(|(id, _, _)| id).collect();
                    for id in ids {
                        let s = self.score_cell(&scorer, self.store.get(id).expect("live id"));
                        self.store.rescore(id, s);
                    }
                    self.failed_scored_with = None;
                    return;
                }
            }
            Handler::Hidden(HiddenHandler::Nas) => {
                let index = NasIndex::new(
                    self.store
                        .iter()
                        .filter(|(id, _, _)| !self.failed.contains(id))
                        .map(|(_, c, _)| (Box::from(c.best().0), c.best().1.f)),
                );
                self.rescore_failed(Some(&index));
                return;
            }
            Handler::Hidden(HiddenHandler::Barrier | HiddenHandler::SubBarrier) => return,
            _ => {}
        }
        let key = (
            self.scorer().fallback.to_bits(),
            self.incumbent.as_ref().map(|i| i.0.to_bits()),
        );
        if self.failed_scored_with != Some(key) {
            self.rescore_failed(None);
            self.failed_scored_with = Some(key);
        }
    }

    fn update_context(&mut self) {
        let Some((id, score)) = self.store.best() else {
            return;
        };
        let cell = self.store.get(id).expect("live id");
        self.ctx.f_best = score;
        self.ctx.x_best = cell.best().0.to_vec();
        self.ctx.incumbent_measure = self.store.group_of(id).unwrap_or(0.0);
        let comparable = !matches!(self.strat.handler, Handler::Glce(_))
            || self.glce.phase == GlcePhase::Improve;
        if let Some((f, u)) = self.local_best.as_ref().filter(|_| comparable) {
            if *f < score {
                self.ctx.f_best = *f;
                self.ctx.x_best = u.clone();
            }
        }
        if let Selector::Hull {
            scaling: Scaling::Median | Scaling::Average,
            ..
        } = self.strat.selector
        {
            let mut scores: Vec<f64> = self.store.iter().map(|(_, _, s)| s).collect();
            self.ctx.set_statistics(&mut scores);
        }
    }

    fn candidates(&self) -> Vec<Candidate> {
        self.store
            .iter()
            .map(|(id, _, score)| Candidate {
                id,
                measure: self.store.group_of(id).unwrap_or(0.0),
                score,
            })
            .collect()
    }

    fn select(&mut self) -> PohSet {
        match self.strat.selector {
            Selector::Hull { scaling, per_group } => {
                // the hull never reaches left of the rightmost minimum
                let from = self.store.rightmost_best_measure().unwrap_or(0.0);
                let mut heads = self.store.group_heads_from(from);
                if self.strat.globally_biased {
                    heads = gb_filter(heads, &mut self.ctx.gb);
                }
                select_convex_hull(&heads, &self.ctx, scaling, per_group)
            }
            Selector::Extremes(ExtremeMode::Plor) => {
                let first = self
                    .store
                    .rightmost_best_measure()
                    .and_then(|m| self.store.group_head(m));
                let heads: Vec<GroupHead> = first
                    .into_iter()
                    .chain(self.store.last_group_head())
                    .collect();
                let heads = if heads.len() == 2 && heads[0].measure == heads[1].measure {
                    heads[..1].to_vec()
                } else {
                    heads
                };
                select_group_extremes(&heads, ExtremeMode::Plor)
            }
            Selector::Extremes(mode) => select_group_extremes(&self.store.group_heads(), mode),
            Selector::Gl(mode) => {
                let x_best = &self.ctx.x_best;
                let cands: Vec<GlCandidate> = self
                    .store
                    .iter()
                    .map(|(id, c, score)| GlCandidate {
                        id,
                        measure: self.store.group_of(id).unwrap_or(0.0),
                        score,
                        distance: distance(c.best().0, x_best),
                    })
                    .collect();
                select_gl(&cands, self.ctx.incumbent_measure, mode)
            }
            Selector::MultiLevel(_) => {
                let (level, eps) = level_step(&mut self.ctx.level);
                let view = level_view(&self.candidates(), level);
                let heads = heads_of(&view);
                let view_best = view.iter().map(|c| c.score).fold(f64::INFINITY, f64::min);
                let saved = (self.ctx.epsilon, self.ctx.f_best);
                self.ctx.epsilon = eps;
                self.ctx.f_best = self.ctx.f_best.min(view_best);
                let poh = select_convex_hull(&heads, &self.ctx, Scaling::None, PerGroup::AllTies);
                (self.ctx.epsilon, self.ctx.f_best) = saved;
                poh
            }
        }
    }

    fn subdivide(&mut self, poh: &PohSet) -> Result<()> {
        let parents: Vec<usize> = poh
            .ids()
            .iter()
            .copied()
            .filter(|id| self.store.get(*id).is_some())
            .collect();
        let mut points = Vec::new();
        let mut counts = Vec::with_capacity(parents.len());
        for &id in &parents {
            let p = self.store.get(id).expect("live id").split_points();
            counts.push(p.len());
            points.extend(p);
        }
        let plan = ParallelPlan::balanced(parents.len(), self.exec.workers());
        let values = self.evaluate_grouped(points, &counts, &plan)?;
        let mut offsets = Vec::with_capacity(counts.len() + 1);
        let mut acc = 0;
        for c in &counts {
            offsets.push(acc);
            acc += c;
        }
        offsets.push(acc);

        let scorer = self.scorer();
        let rank = move |e: &Eval| scorer.rank(e);
        let (store, parent_ids, vals, offs) = (&self.store, &parents, &values, &offsets);
        let parts = self.exec.execute(&plan, &|r| {
            r.map(|k| {
                let cell = store.get(parent_ids[k]).expect("live id");
                cell.split(&vals[offs[k]..offs[k + 1]], &rank)
            })
            .collect::<Vec<Vec<C>>>()
        })?;

        for (&parent, children) in parents.iter().zip(parts.into_iter().flatten()) {
            let mut children = children.into_iter();
            if let Some(first) = children.next() {
                self.failed.remove(&parent);
                if self.discard(&first) {
                    self.store.remove(parent);
                } else {
                    let score = self.score_cell(&scorer, &first);
                    if first.best().1.failed() {
                        self.failed.insert(parent);
                    }
                    self.store.replace(parent, first, score);
                }
            }
            for child in children {
                if !self.discard(&child) {
                    self.insert(child);
                }
            }
        }
        Ok(())
    }

    /// Elements dropped from the partition: mirror images under symmetry,
    /// and elements too small for their children to get distinct samples.
    fn discard(&self, cell: &C) -> bool {
        cell.measure() < MIN_MEASURE
            || self.symmetry.is_some_and(|rule| {
                let (lo, hi) = cell.bounding_box();
                symmetric_discard(&lo, &hi, rule)
            })
    }

    /// Local search from `u0` (unit coordinates) with known value `f0`.
    fn local_from(&mut self, u0: &[f64], f0: f64, budget: usize) {
        let n = self.spec.dim();
        let budget = budget.min(self.cfg.max_evals.saturating_sub(self.evals));
        if budget < n + 2 {
            return;
        }
        let (spec, map) = (self.spec, &self.map);
        let mut seen: Vec<(Vec<f64>, Eval)> = Vec::new();
        let mut eval = |u: &[f64]| {
            let x = map.to_original(u);
            let p = LocalPoint {
                f: spec.objective_unchecked(&x),
                g: inequality_values(spec, &x),
            };
            let phi = if spec.is_constrained() {
                spec.violation_unchecked(&x)
            } else {
                0.0
            };
            seen.push((u.to_vec(), Eval::new(p.f, phi)));
            p
        };
        let start = (!spec.is_constrained()).then(|| LocalPoint {
            f: f0,
            g: Vec::new(),
        });
        let lo = vec![0.0; n];
        let hi = vec![1.0; n];
        let result = minimize(&mut eval, &lo, &hi, u0, start, budget);
        self.evals += result.used;
        for (u, e) in seen {
            self.record(&u, e);
            if e.f.is_finite()
                && e.phi <= self.cfg.eps_phi
                && self.local_best.as_ref().is_none_or(|b| e.f < b.0)
            {
                self.local_best = Some((e.f, u));
            }
        }
    }
}
