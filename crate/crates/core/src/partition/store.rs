//! Storage for partition elements, grouped by measure.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::math::Total;

use super::Cell;

/// Relative tolerance under which two measures share a group.
pub const GROUP_RTOL: f64 = 1e-12;

/// Initial capacity of the pooled backend.
const POOL_START: usize = 1 << 14;

/// Memory layout of a [`PartitionStore`]. Both behave identically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StorageKind {
    /// Contiguous slots preallocated for 2^14 elements, doubled on demand.
    #[default]
    StaticPool,
    /// One heap node per element.
    Dynamic,
}

struct Entry<C> {
    cell: C,
    score: f64,
    group: f64,
}

enum Slots<C> {
    Pool(Vec<Option<Entry<C>>>),
    Nodes(Vec<Option<Box<Entry<C>>>>),
}

impl<C> Slots<C> {
    fn len(&self) -> usize {
        match self {
            Slots::Pool(v) => v.len(),
            Slots::Nodes(v) => v.len(),
        }
    }

    fn get(&self, id: usize) -> Option<&Entry<C>> {
        match self {
            Slots::Pool(v) => v.get(id).and_then(Option::as_ref),
            Slots::Nodes(v) => v.get(id).and_then(|e| e.as_deref()),
        }
    }

    fn get_mut(&mut self, id: usize) -> Option<&mut Entry<C>> {
        match self {
            Slots::Pool(v) => v.get_mut(id).and_then(Option::as_mut),
            Slots::Nodes(v) => v.get_mut(id).and_then(|e| e.as_deref_mut()),
        }
    }

    fn push(&mut self, e: Entry<C>) {
        match self {
            Slots::Pool(v) => {
                if v.len() == v.capacity() {
                    v.reserve_exact(v.capacity().max(POOL_START));
                }
                v.push(Some(e));
            }
            Slots::Nodes(v) => v.push(Some(Box::new(e))),
        }
    }

    fn set(&mut self, id: usize, e: Option<Entry<C>>) -> Option<Entry<C>> {
        match self {
            Slots::Pool(v) => core::mem::replace(&mut v[id], e),
            Slots::Nodes(v) => core::mem::replace(&mut v[id], e.map(Box::new)).map(|b| *b),
        }
    }
}

/// Size of one measure group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupInfo {
    pub measure: f64,
    pub size: usize,
}

/// A measure group's smallest score and the ids attaining it (ascending).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupHead {
    pub measure: f64,
    pub score: f64,
    pub ids: Vec<usize>,
}

/// Partition elements indexed by a stable id, grouped by measure and
/// ordered by score (ties by lowest id) inside each group.
///
/// The score is the value selection ranks an element by. It is usually the
/// objective at the representative sample, but constraint handlers may
/// rescore elements as their state evolves.
pub struct PartitionStore<C> {
    slots: Slots<C>,
    groups: BTreeMap<Total, BTreeSet<(Total, usize)>>,
    ordered: Option<BTreeSet<(Total, usize)>>,
    live: usize,
}

impl<C: Cell> PartitionStore<C> {
    pub fn new(kind: StorageKind) -> Self {
        let slots = match kind {
            StorageKind::StaticPool => Slots::Pool(Vec::with_capacity(POOL_START)),
            StorageKind::Dynamic => Slots::Nodes(Vec::new()),
        };
        PartitionStore {
            slots,
            groups: BTreeMap::new(),
            ordered: None,
            live: 0,
        }
    }

    /// Also keeps a store-wide score order (needed by [`PartitionStore::ids_by_score`]).
    pub fn with_global_order(mut self) -> Self {
        let mut set = BTreeSet::new();
        for (id, _, s) in self.iter() {
            set.insert((Total(s), id));
        }
        self.ordered = Some(set);
        self
    }

    /// Number of live elements.
    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Id the next inserted element will receive.
    pub fn next_id(&self) -> usize {
        self.slots.len()
    }

    fn group_key(&self, m: f64) -> f64 {
        let tol = GROUP_RTOL * m.abs();
        let below = self.groups.range(..=Total(m)).next_back().map(|(k, _)| k.0);
        let above = self.groups.range(Total(m)..).next().map(|(k, _)| k.0);
        for k in [below, above].into_iter().flatten() {
            if (k - m).abs() <= tol.max(GROUP_RTOL * k.abs()) {
                return k;
            }
        }
        m
    }

    fn link(&mut self, id: usize, group: f64, score: f64) {
        self.groups
            .entry(Total(group))
            .or_default()
            .insert((Total(score), id));
        if let Some(o) = self.ordered.as_mut() {
            o.insert((Total(score), id));
        }
    }

    fn unlink(&mut self, id: usize, group: f64, score: f64) {
        if let Some(set) = self.groups.get_mut(&Total(group)) {
            set.remove(&(Total(score), id));
            if set.is_empty() {
                self.groups.remove(&Total(group));
            }
        }
        if let Some(o) = self.ordered.as_mut() {
            o.remove(&(Total(score), id));
        }
    }

    /// Adds an element and returns its id.
    pub fn insert(&mut self, cell: C, score: f64) -> usize {
        let id = self.slots.len();
        let group = self.group_key(cell.measure());
        self.slots.push(Entry { cell, score, group });
        self.link(id, group, score);
        self.live += 1;
        id
    }

    /// Replaces the element `id` in place (it keeps its id).
    pub fn replace(&mut self, id: usize, cell: C, score: f64) {
        if self.remove(id).is_none() {
            return;
        }
        let group = self.group_key(cell.measure());
        self.slots.set(id, Some(Entry { cell, score, group }));
        self.link(id, group, score);
        self.live += 1;
    }

    /// Removes an element, returning it.
    pub fn remove(&mut self, id: usize) -> Option<C> {
        if id >= self.slots.len() {
            return None;
        }
        let e = self.slots.set(id, None)?;
        self.unlink(id, e.group, e.score);
        self.live -= 1;
        Some(e.cell)
    }

    pub fn get(&self, id: usize) -> Option<&C> {
        self.slots.get(id).map(|e| &e.cell)
    }

    pub fn score(&self, id: usize) -> Option<f64> {
        self.slots.get(id).map(|e| e.score)
    }

    /// Group measure the element was filed under.
    pub fn group_of(&self, id: usize) -> Option<f64> {
        self.slots.get(id).map(|e| e.group)
    }

    /// Changes the score of an element.
    pub fn rescore(&mut self, id: usize, score: f64) {
        let Some(e) = self.slots.get(id) else { return };
        let (group, old) = (e.group, e.score);
        if old.to_bits() == score.to_bits() {
            return;
        }
        self.unlink(id, group, old);
        if let Some(e) = self.slots.get_mut(id) {
            e.score = score;
        }
        self.link(id, group, score);
    }

    /// Live elements in id order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &C, f64)> + '_ {
        (0..self.slots.len())
            .filter_map(move |id| self.slots.get(id).map(|e| (id, &e.cell, e.score)))
    }

    /// Groups in ascending measure.
    pub fn groups(&self) -> Vec<GroupInfo> {
        self.groups
            .iter()
            .map(|(k, s)| GroupInfo {
                measure: k.0,
                size: s.len(),
            })
            .collect()
    }

    /// Smallest score of each group with the ids attaining it, ascending measure.
    pub fn group_heads(&self) -> Vec<GroupHead> {
        self.groups
            .iter()
            .map(|(k, s)| head(k.0, s.iter().copied()))
            .collect()
    }

    /// Group heads with measure at least `measure` (its own group included), ascending.
    pub fn group_heads_from(&self, measure: f64) -> Vec<GroupHead> {
        let key = self.group_key(measure);
        self.groups
            .range(Total(key)..)
            .map(|(k, s)| head(k.0, s.iter().copied()))
            .collect()
    }

    /// Head of the group filed under `measure`.
    pub fn group_head(&self, measure: f64) -> Option<GroupHead> {
        let key = self.group_key(measure);
        self.groups
            .get(&Total(key))
            .map(|s| head(key, s.iter().copied()))
    }

    /// Head of the group of largest measure.
    pub fn last_group_head(&self) -> Option<GroupHead> {
        self.groups
            .iter()
            .next_back()
            .map(|(k, s)| head(k.0, s.iter().copied()))
    }

    /// Largest group measure among the elements tying the smallest score.
    pub fn rightmost_best_measure(&self) -> Option<f64> {
        let (_, best) = self.best()?;
        match &self.ordered {
            Some(o) => o
                .iter()
                .take_while(|(f, _)| f.0.total_cmp(&best).is_eq())
                .filter_map(|(_, id)| self.group_of(*id))
                .reduce(f64::max),
            None => self
                .groups
                .iter()
                .rev()
                .find(|(_, s)| s.first().is_some_and(|(f, _)| f.0.total_cmp(&best).is_eq()))
                .map(|(k, _)| k.0),
        }
    }

    /// Members of the group filed under `measure`, by ascending score then id.
    pub fn group_members(&self, measure: f64) -> impl Iterator<Item = (f64, usize)> + '_ {
        let key = self.group_key(measure);
        self.groups
            .get(&Total(key))
            .into_iter()
            .flat_map(|s| s.iter().map(|(f, id)| (f.0, *id)))
    }

    /// Members of the group in descending score (ties by highest id first).
    pub fn group_members_rev(&self, measure: f64) -> impl Iterator<Item = (f64, usize)> + '_ {
        let key = self.group_key(measure);
        self.groups
            .get(&Total(key))
            .into_iter()
            .flat_map(|s| s.iter().rev().map(|(f, id)| (f.0, *id)))
    }

    /// Smallest score in the group of measure `delta`, if that group exists.
    pub fn min_f_in_group(&self, delta: f64) -> Option<f64> {
        let key = self.group_key(delta);
        self.groups
            .get(&Total(key))
            .and_then(|s| s.first())
            .map(|(f, _)| f.0)
    }

    /// Element with the smallest score (lowest id among ties).
    pub fn best(&self) -> Option<(usize, f64)> {
        if let Some(o) = &self.ordered {
            return o.first().map(|(f, id)| (*id, f.0));
        }
        self.groups
            .values()
            .filter_map(|s| s.first())
            .min()
            .map(|(f, id)| (*id, f.0))
    }

    /// Every element by ascending score; requires [`PartitionStore::with_global_order`].
    pub fn ids_by_score(&self) -> Option<impl Iterator<Item = (f64, usize)> + '_> {
        self.ordered
            .as_ref()
            .map(|o| o.iter().map(|(f, id)| (f.0, *id)))
    }
}

pub(crate) fn head(measure: f64, mut members: impl Iterator<Item = (Total, usize)>) -> GroupHead {
    let (first, id) = members.next().expect("groups are never empty");
    let mut ids = alloc::vec![id];
    for (f, id) in members {
        if f.0.to_bits() == first.0.to_bits() || f.0 == first.0 {
            ids.push(id);
        } else {
            break;
        }
    }
    ids.sort_unstable();
    GroupHead {
        measure,
        score: first.0,
        ids,
    }
}
