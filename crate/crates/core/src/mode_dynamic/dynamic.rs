use std::collections::HashMap;

use serde::Serialize;

use super::dominance::{Coords, DominanceStore, Point};
use super::forest::{OrderForest, NIL};
use super::layout::{layout, Left, Right};
use super::params::{DynParams, LevelSpec};
use crate::error::check_range;
use crate::{Color, Error, Result};

/// Work counters of a [`DynamicMode`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DynStats {
    pub inserts: u64,
    pub deletes: u64,
    pub queries: u64,
    /// Intervals created, removed or resized.
    pub touches: u64,
    pub rebuilds: u64,
    /// Intervals laid by rebuilds.
    pub rebuilt_intervals: u64,
    /// Largest number of intervals laid by one rebuild.
    pub max_rebuilt: usize,
    /// Rebuilds that had to lay out a whole level.
    pub relayouts: u64,
}

impl DynStats {
    pub fn updates(&self) -> u64 {
        self.inserts + self.deletes
    }
}

/// Answer of [`DynamicMode::query`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DynAnswer {
    pub position: usize,
    pub color: Color,
    /// Level of the dominated interval, or `None` when no interval fits and
    /// every element of the window is a mode.
    pub level: Option<u32>,
}

/// Interval of a sparse level, between two occurrences of its color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Interval {
    pub start: u32,
    pub end: u32,
    pub pot: u32,
    /// Whether its dominance point is stored.
    pub live: bool,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct ColorState {
    pub root: u32,
    /// Sparse levels, indexed from the dense cutoff.
    pub sparse: Vec<Vec<Interval>>,
}

/// Order-maintenance labels: increasing along the sequence, so they stand
/// in for positions inside D.
pub(crate) struct Labels<'a>(pub &'a [u64]);

impl Coords for Labels<'_> {
    #[inline]
    fn position(&self, elem: u32) -> usize {
        self.0[elem as usize] as usize
    }
}

/// Label gap left between neighbors by appends and relabelings.
const LABEL_STEP: u64 = 1 << 32;
/// Least spacing a relabeled window must reach.
const LABEL_SPACING: u64 = 1 << 16;

/// Dynamic `(1+ε)`-approximate range mode over a sequence that supports
/// insertions and deletions at arbitrary positions.
///
/// Every color keeps, per level `j`, intervals of consecutive occurrences of
/// roughly `δ^j` occurrences each. Each interval is a point in a
/// dominance-max store; a query reports the highest level with an interval
/// inside the window.
#[derive(Clone, Debug)]
pub struct DynamicMode {
    pub(crate) params: DynParams,
    pub(crate) seq: OrderForest,
    pub(crate) seq_root: u32,
    pub(crate) colors: Vec<Color>,
    pub(crate) labels: Vec<u64>,
    pub(crate) occ: OrderForest,
    pub(crate) occ_elem: Vec<u32>,
    pub(crate) elem_occ: Vec<u32>,
    pub(crate) states: HashMap<Color, ColorState>,
    pub(crate) dmax: DominanceStore,
    pub(crate) stats: DynStats,
}

impl DynamicMode {
    pub fn new(epsilon: f64, n_hint: usize) -> Result<Self> {
        Self::with_seed(epsilon, n_hint, 0x5eed)
    }

    /// The seed drives treap priorities only; answers do not depend on it.
    pub fn with_seed(epsilon: f64, n_hint: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            params: DynParams::new(epsilon, n_hint)?,
            seq: OrderForest::new(seed),
            seq_root: NIL,
            colors: Vec::with_capacity(n_hint),
            labels: Vec::with_capacity(n_hint),
            occ: OrderForest::new(seed ^ 0x9e37_79b9),
            occ_elem: Vec::with_capacity(n_hint),
            elem_occ: Vec::with_capacity(n_hint),
            states: HashMap::new(),
            dmax: DominanceStore::new(seed ^ 0x7f4a_7c15),
            stats: DynStats::default(),
        })
    }

    pub fn from_sequence(seq: &[Color], epsilon: f64) -> Result<Self> {
        let mut d = Self::new(epsilon, seq.len())?;
        for (i, &c) in seq.iter().enumerate() {
            d.insert(i + 1, c)?;
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.seq.size(self.seq_root)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn params(&self) -> &DynParams {
        &self.params
    }

    pub fn stats(&self) -> DynStats {
        self.stats
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    /// Color at 1-based position `pos`.
    pub fn get(&self, pos: usize) -> Result<Color> {
        if pos == 0 || pos > self.len() {
            return Err(Error::IndexOutOfBounds {
                index: pos,
                len: self.len(),
            });
        }
        Ok(self.colors[self.seq.select(self.seq_root, pos) as usize])
    }

    pub fn to_vec(&self) -> Vec<Color> {
        self.seq
            .in_order(self.seq_root)
            .into_iter()
            .map(|e| self.colors[e as usize])
            .collect()
    }

    /// Intervals of `color` on level `j`, as occurrence ranks.
    pub fn intervals(&self, color: Color, j: u32) -> Vec<(usize, usize)> {
        let Some(state) = self.states.get(&color) else {
            return Vec::new();
        };
        let f = self.occ.size(state.root);
        if j == 0 || j as usize > self.params.levels().len() {
            return Vec::new();
        }
        let spec = self.params.level(j);
        if f < spec.min_occurrences() {
            return Vec::new();
        }
        if spec.dense {
            return (1..=f + 1 - spec.size_lo).map(|r| (r, r + spec.size_lo - 1)).collect();
        }
        state
            .sparse
            .get((j - self.params.dense_cutoff) as usize)
            .map(|ivs| ivs.iter().map(|iv| (self.occ.rank(iv.start), self.occ.rank(iv.end))).collect())
            .unwrap_or_default()
    }

    /// Stored dominance points of one color.
    pub fn dominance_points_of(&self, color: Color) -> usize {
        self.dmax.points().iter().filter(|p| p.color == color).count()
    }

    /// Number of stored dominance points.
    pub fn point_count(&self) -> usize {
        self.dmax.len()
    }

    pub fn insert(&mut self, pos: usize, color: Color) -> Result<()> {
        let n = self.len();
        if pos == 0 || pos > n + 1 {
            return Err(Error::IndexOutOfBounds { index: pos, len: n + 1 });
        }
        let e = self.seq.alloc();
        self.seq_root = self.seq.insert_at(self.seq_root, pos, e);
        grow(&mut self.colors, e, color);
        self.assign_label(e, pos);

        let Self {
            params,
            seq,
            labels,
            occ,
            occ_elem,
            elem_occ,
            states,
            dmax,
            stats,
            ..
        } = self;
        let state = states.entry(color).or_insert_with(|| ColorState {
            root: NIL,
            sparse: Vec::new(),
        });
        let rho = occ.partition_point(state.root, |o| seq.rank(occ_elem[o as usize]) < pos) + 1;
        let f = occ.size(state.root) + 1;
        params.ensure(f);
        let coords = Labels(labels);

        for spec in params.active_levels(f).filter(|l| l.dense) {
            let l = spec.size_lo;
            if f > l {
                let lo = (rho + 1).saturating_sub(l).max(1);
                let hi = (rho - 1).min(f - l);
                for r in lo..=hi {
                    let p = dense_point(occ, occ_elem, state.root, spec, color, r);
                    dmax.delete(&coords, p)?;
                    stats.touches += 1;
                }
            }
        }

        let o = occ.alloc();
        grow(occ_elem, o, e);
        grow(elem_occ, e, o);
        state.root = occ.insert_at(state.root, rho, o);

        for spec in params.active_levels(f) {
            if spec.dense {
                let l = spec.size_lo;
                let lo = (rho + 1).saturating_sub(l).max(1);
                for r in lo..=rho.min(f + 1 - l) {
                    let p = dense_point(occ, occ_elem, state.root, spec, color, r);
                    dmax.insert(&coords, p)?;
                    stats.touches += 1;
                }
                continue;
            }
            let idx = (spec.j - params.dense_cutoff) as usize;
            if state.sparse.len() <= idx {
                state.sparse.resize(idx + 1, Vec::new());
            }
            let mut lv = Sparse {
                spec,
                color,
                f,
                root: state.root,
                occ,
                occ_elem,
                coords: &coords,
                dmax: &mut *dmax,
                stats: &mut *stats,
            };
            lv.after_insert(&mut state.sparse[idx], rho)?;
        }
        self.stats.inserts += 1;
        Ok(())
    }

    pub fn delete(&mut self, pos: usize) -> Result<Color> {
        let n = self.len();
        if pos == 0 || pos > n {
            return Err(Error::IndexOutOfBounds { index: pos, len: n });
        }
        let e = self.seq.select(self.seq_root, pos);
        let color = self.colors[e as usize];
        let Self {
            params,
            seq,
            seq_root,
            labels,
            occ,
            occ_elem,
            elem_occ,
            states,
            dmax,
            stats,
            ..
        } = self;
        let state = states.get_mut(&color).expect("color of a live element");
        let o = elem_occ[e as usize];
        let rho = occ.rank(o);
        let f = occ.size(state.root);

        {
            let coords = Labels(labels);
            for spec in params.active_levels(f) {
                if spec.dense {
                    let l = spec.size_lo;
                    let lo = (rho + 1).saturating_sub(l).max(1);
                    for r in lo..=rho.min(f + 1 - l) {
                        let p = dense_point(occ, occ_elem, state.root, spec, color, r);
                        dmax.delete(&coords, p)?;
                        stats.touches += 1;
                    }
                    continue;
                }
                let idx = (spec.j - params.dense_cutoff) as usize;
                let mut lv = Sparse {
                    spec,
                    color,
                    f,
                    root: state.root,
                    occ,
                    occ_elem,
                    coords: &coords,
                    dmax: &mut *dmax,
                    stats: &mut *stats,
                };
                lv.before_delete(&mut state.sparse[idx], o, rho)?;
            }
        }

        state.root = occ.remove(state.root, o);
        occ.release(o);
        *seq_root = seq.remove(*seq_root, e);
        seq.release(e);
        let f = f - 1;

        let coords = Labels(labels);
        for spec in params.active_levels(f + 1) {
            if spec.dense {
                if f < spec.size_lo {
                    continue;
                }
                let l = spec.size_lo;
                let lo = (rho + 1).saturating_sub(l).max(1);
                for r in lo..=(rho - 1).min(f + 1 - l) {
                    let p = dense_point(occ, occ_elem, state.root, spec, color, r);
                    dmax.insert(&coords, p)?;
                    stats.touches += 1;
                }
                continue;
            }
            let idx = (spec.j - params.dense_cutoff) as usize;
            let mut lv = Sparse {
                spec,
                color,
                f,
                root: state.root,
                occ,
                occ_elem,
                coords: &coords,
                dmax: &mut *dmax,
                stats: &mut *stats,
            };
            lv.after_delete(&mut state.sparse[idx], rho)?;
        }
        if f == 0 {
            states.remove(&color);
        }
        self.stats.deletes += 1;
        Ok(color)
    }

    /// Position and color of a `(1+ε)`-approximate mode of `[a, b]`.
    pub fn query(&mut self, a: usize, b: usize) -> Result<DynAnswer> {
        self.stats.queries += 1;
        self.peek(a, b)
    }

    /// [`query`](Self::query) without touching the counters.
    pub fn peek(&self, a: usize, b: usize) -> Result<DynAnswer> {
        check_range(a, b, self.len())?;
        let (la, lb) = self.label_window(a, b);
        Ok(match self.dmax.query(&Labels(&self.labels), la, lb) {
            Some(p) => DynAnswer {
                position: self.seq.rank(p.start),
                color: p.color,
                level: Some(p.level),
            },
            None => DynAnswer {
                position: a,
                color: self.get(a)?,
                level: None,
            },
        })
    }

    /// Highest dominated level by a full scan over the stored points.
    pub fn dmax_linear(&self, a: usize, b: usize) -> Option<u32> {
        let pos = self.positions();
        self.dmax.query_linear(&pos, a, b)
    }

    /// Highest dominated level from the dominance store.
    pub fn dmax_query(&self, a: usize, b: usize) -> Option<u32> {
        let (la, lb) = self.label_window(a, b);
        self.dmax.query(&Labels(&self.labels), la, lb).map(|p| p.level)
    }

    fn label_window(&self, a: usize, b: usize) -> (usize, usize) {
        let at = |p: usize| self.labels[self.seq.select(self.seq_root, p) as usize] as usize;
        (at(a), at(b))
    }

    /// Labels element `e`, just inserted at `pos`, relabeling a window
    /// around it when its neighbors leave no room.
    fn assign_label(&mut self, e: u32, pos: usize) {
        let n = self.len();
        let label_at = |d: &Self, p: usize| d.labels[d.seq.select(d.seq_root, p) as usize];
        let lo = if pos > 1 { label_at(self, pos - 1) } else { 0 };
        let hi = if pos < n { label_at(self, pos + 1) } else { u64::MAX };
        if hi - lo >= 2 {
            let half = (hi - lo) / 2;
            let l = if pos == n {
                lo + half.min(LABEL_STEP)
            } else if pos == 1 {
                hi - half.min(LABEL_STEP)
            } else {
                lo + half
            };
            grow(&mut self.labels, e, l);
            return;
        }
        grow(&mut self.labels, e, 0);
        let mut k = 8;
        loop {
            let (first, last) = (pos.saturating_sub(k).max(1), (pos + k).min(n));
            let lo = if first > 1 { label_at(self, first - 1) } else { 0 };
            let hi = if last < n { label_at(self, last + 1) } else { u64::MAX };
            let count = (last - first + 1) as u64;
            let spacing = (hi - lo) / (count + 1);
            if spacing >= LABEL_SPACING || (first == 1 && last == n) {
                let spacing = spacing.min(LABEL_STEP);
                for (i, p) in (first..=last).enumerate() {
                    let x = self.seq.select(self.seq_root, p);
                    self.labels[x as usize] = lo + spacing * (i as u64 + 1);
                }
                return;
            }
            k *= 2;
        }
    }

    /// Position of every element id, from one in-order walk.
    pub(crate) fn positions(&self) -> PositionTable {
        let mut pos = vec![0usize; self.seq.capacity()];
        for (i, e) in self.seq.in_order(self.seq_root).into_iter().enumerate() {
            pos[e as usize] = i + 1;
        }
        PositionTable(pos)
    }

    pub(crate) fn dominance_points(&self) -> Vec<Point> {
        self.dmax.points()
    }
}

pub(crate) struct PositionTable(pub Vec<usize>);

impl Coords for PositionTable {
    #[inline]
    fn position(&self, elem: u32) -> usize {
        self.0[elem as usize]
    }
}

fn grow<T: Copy + Default>(v: &mut Vec<T>, i: u32, x: T) {
    if v.len() <= i as usize {
        v.resize(i as usize + 1, T::default());
    }
    v[i as usize] = x;
}

/// Dense-level point for the interval of occurrences `r ..= r + L - 1`.
pub(crate) fn dense_point(
    occ: &OrderForest,
    occ_elem: &[u32],
    root: u32,
    spec: &LevelSpec,
    color: Color,
    r: usize,
) -> Point {
    Point {
        level: spec.j,
        start: occ_elem[occ.select(root, r) as usize],
        end: occ_elem[occ.select(root, r + spec.size_lo - 1) as usize],
        color,
    }
}

/// One sparse level of one color during an update.
struct Sparse<'a, C: Coords> {
    spec: &'a LevelSpec,
    color: Color,
    /// Occurrence count of the color for this step.
    f: usize,
    root: u32,
    occ: &'a OrderForest,
    occ_elem: &'a [u32],
    coords: &'a C,
    dmax: &'a mut DominanceStore,
    stats: &'a mut DynStats,
}

impl<C: Coords> Sparse<'_, C> {
    #[inline]
    fn rank(&self, o: u32) -> usize {
        self.occ.rank(o)
    }

    #[inline]
    fn node(&self, r: usize) -> u32 {
        self.occ.select(self.root, r)
    }

    fn point(&self, iv: &Interval) -> Point {
        Point {
            level: self.spec.j,
            start: self.occ_elem[iv.start as usize],
            end: self.occ_elem[iv.end as usize],
            color: self.color,
        }
    }

    fn unlink(&mut self, iv: &mut Interval) -> Result<()> {
        if iv.live {
            let p = self.point(iv);
            self.dmax.delete(self.coords, p)?;
            iv.live = false;
        }
        Ok(())
    }

    /// Stores points of intervals whose start rank lies in `[lo, hi]`, plus
    /// the first and last interval.
    fn link_range(&mut self, ivs: &mut [Interval], lo: usize, hi: usize) -> Result<()> {
        let a = ivs.partition_point(|iv| self.rank(iv.start) < lo);
        let b = ivs.partition_point(|iv| self.rank(iv.start) <= hi);
        let last = ivs.len().saturating_sub(1);
        for i in (a..b).chain([0, last]) {
            if i < ivs.len() && !ivs[i].live {
                let p = self.point(&ivs[i]);
                self.dmax.insert(self.coords, p)?;
                ivs[i].live = true;
            }
        }
        Ok(())
    }

    fn after_insert(&mut self, ivs: &mut Vec<Interval>, rho: usize) -> Result<()> {
        if ivs.is_empty() {
            if self.f > self.spec.size_lo {
                self.relayout(ivs)?;
                self.link_range(ivs, 1, self.f)?;
            }
            return Ok(());
        }
        let p = ivs.partition_point(|iv| self.rank(iv.start) < rho);
        for i in (0..p).rev() {
            let s = self.rank(ivs[i].start);
            if s + self.spec.size_hi + 1 <= rho {
                break;
            }
            if self.rank(ivs[i].end) > rho {
                ivs[i].pot += 1;
                self.stats.touches += 1;
            }
        }
        self.repair(ivs, rho)
    }

    /// Runs before occurrence `o` (rank `rho`) is removed.
    fn before_delete(&mut self, ivs: &mut Vec<Interval>, o: u32, rho: usize) -> Result<()> {
        let p = ivs.partition_point(|iv| self.rank(iv.start) <= rho);
        let mut emptied = Vec::new();
        for i in (0..p).rev() {
            let s = self.rank(ivs[i].start);
            if s + self.spec.size_hi + 1 < rho {
                break;
            }
            if self.rank(ivs[i].end) < rho {
                continue;
            }
            let mut iv = ivs[i];
            if iv.start == o || iv.end == o {
                self.unlink(&mut iv)?;
                if iv.pot == 1 {
                    emptied.push(i);
                } else if iv.start == o {
                    iv.start = self.node(rho + 1);
                } else {
                    iv.end = self.node(rho - 1);
                }
            }
            iv.pot -= 1;
            ivs[i] = iv;
            self.stats.touches += 1;
        }
        for i in emptied {
            ivs.remove(i);
        }
        Ok(())
    }

    /// Runs after removal; `rho` is the rank the removed occurrence had.
    fn after_delete(&mut self, ivs: &mut Vec<Interval>, rho: usize) -> Result<()> {
        if self.f <= self.spec.size_lo {
            for mut iv in std::mem::take(ivs) {
                self.unlink(&mut iv)?;
                self.stats.touches += 1;
            }
            return Ok(());
        }
        if ivs.is_empty() {
            self.relayout(ivs)?;
            return self.link_range(ivs, 1, self.f);
        }
        self.repair(ivs, rho.min(self.f))
    }

    /// First interval index breaking an invariant, among those near `rho`
    /// and the two ends.
    fn find_violation(&self, ivs: &[Interval], rho: usize) -> Option<usize> {
        let spec = self.spec;
        let reach = spec.size_hi + spec.gap_hi + 2;
        let a = ivs.partition_point(|iv| self.rank(iv.start) + reach < rho);
        let b = ivs.partition_point(|iv| self.rank(iv.start) <= rho + spec.gap_hi + 1);
        let last = ivs.len() - 1;
        let mut idx: Vec<usize> = [0].into_iter().chain(a.saturating_sub(1)..b.min(ivs.len())).collect();
        idx.push(last);
        idx.into_iter().find(|&i| self.violates(ivs, i))
    }

    fn violates(&self, ivs: &[Interval], i: usize) -> bool {
        let spec = self.spec;
        let pot = ivs[i].pot as usize;
        if pot <= spec.size_lo || pot > spec.size_hi + 1 {
            return true;
        }
        let s = self.rank(ivs[i].start);
        if i == 0 && s - 1 > spec.gap_lo {
            return true;
        }
        if i + 1 == ivs.len() && self.f - self.rank(ivs[i].end) > spec.gap_lo {
            return true;
        }
        if i + 1 < ivs.len() {
            let g = self.rank(ivs[i + 1].start).saturating_sub(s);
            if g < spec.gap_lo || g > spec.gap_hi {
                return true;
            }
        }
        false
    }

    fn repair(&mut self, ivs: &mut Vec<Interval>, rho: usize) -> Result<()> {
        let (mut lo, mut hi) = (rho, rho);
        let mut rounds = 0;
        while let Some(k) = self.find_violation(ivs, rho) {
            rounds += 1;
            let (a, b) = if rounds > 8 {
                self.relayout(ivs)?;
                (1, self.f)
            } else {
                self.rebuild(ivs, k)?
            };
            lo = lo.min(a);
            hi = hi.max(b);
            if ivs.is_empty() {
                break;
            }
        }
        // Re-anchored intervals may start up to a full size before `rho`.
        let back = self.spec.size_hi + self.spec.gap_hi + 2;
        self.link_range(ivs, lo.saturating_sub(back), hi + self.spec.gap_hi + 1)
    }

    /// Replaces the intervals meeting `[s_k, e_{k+1}]`; returns the rank span
    /// of the new starts.
    fn rebuild(&mut self, ivs: &mut Vec<Interval>, k: usize) -> Result<(usize, usize)> {
        let spec = self.spec;
        let last = ivs.len() - 1;
        let sk = self.rank(ivs[k].start);
        let reach = self.rank(ivs[k].end).max(self.rank(ivs[(k + 1).min(last)].end));
        let mut lo = k;
        for i in (0..k).rev() {
            if self.rank(ivs[i].start) + spec.size_hi + 2 < sk {
                break;
            }
            if self.rank(ivs[i].end) >= sk {
                lo = i;
            }
        }
        let mut hi = k;
        while hi < last && self.rank(ivs[hi + 1].start) <= reach {
            hi += 1;
        }
        loop {
            let left = if lo == 0 {
                Left::Head
            } else {
                Left::Anchor {
                    start: self.rank(ivs[lo - 1].start),
                    end: self.rank(ivs[lo - 1].end),
                }
            };
            let right = if hi == last {
                Right::Tail
            } else {
                Right::Anchor {
                    start: self.rank(ivs[hi + 1].start),
                }
            };
            if let Some(new) = layout(left, right, self.f, spec) {
                if lo == 0 && hi == last {
                    self.stats.relayouts += 1;
                }
                let span = match (new.first(), new.last()) {
                    (Some(a), Some(b)) => (a.0, b.0),
                    _ => (self.f, 1),
                };
                self.splice(ivs, lo, hi, &new)?;
                return Ok(span);
            }
            if lo == 0 && hi == last {
                return Err(Error::Logic(format!(
                    "no valid layout for level {} with {} occurrences",
                    spec.j, self.f
                )));
            }
            lo = lo.saturating_sub(1);
            hi = (hi + 1).min(last);
        }
    }

    fn relayout(&mut self, ivs: &mut Vec<Interval>) -> Result<()> {
        let new = layout(Left::Head, Right::Tail, self.f, self.spec).ok_or_else(|| {
            Error::Logic(format!("no valid layout for level {}", self.spec.j))
        })?;
        let hi = ivs.len();
        if hi == 0 {
            ivs.extend(new.iter().map(|&(s, e)| self.make(s, e)));
            self.stats.touches += new.len() as u64;
            self.stats.rebuilds += 1;
            self.stats.rebuilt_intervals += new.len() as u64;
            self.stats.max_rebuilt = self.stats.max_rebuilt.max(new.len());
            return Ok(());
        }
        self.stats.relayouts += 1;
        self.splice(ivs, 0, hi - 1, &new)
    }

    fn make(&self, s: usize, e: usize) -> Interval {
        Interval {
            start: self.node(s),
            end: self.node(e),
            pot: (e - s + 1) as u32,
            live: false,
        }
    }

    fn splice(&mut self, ivs: &mut Vec<Interval>, lo: usize, hi: usize, new: &[(usize, usize)]) -> Result<()> {
        for i in lo..=hi {
            let mut iv = ivs[i];
            self.unlink(&mut iv)?;
        }
        let made: Vec<Interval> = new.iter().map(|&(s, e)| self.make(s, e)).collect();
        self.stats.touches += (hi - lo + 1 + made.len()) as u64;
        self.stats.rebuilds += 1;
        self.stats.rebuilt_intervals += made.len() as u64;
        self.stats.max_rebuilt = self.stats.max_rebuilt.max(made.len());
        ivs.splice(lo..=hi, made);
        Ok(())
    }
}
