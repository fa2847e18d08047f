//! Exhaustive oracle sweeps over every window of every corpus sequence.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::corpus::{CorpusItem, Family};
use crate::mode_static::{band, StaticModeIndex, Trichotomy};
use crate::selection::{FixedRankSelector, OnlineRankSelector, RankFunction};
use crate::{ceil_tol, Color, Result};

/// Individually counted properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Answer inside the window with `(1+ε)·freq >= F`.
    ModeSound,
    /// Exact answer when `F <= ⌈1/ε⌉`.
    ModeExact,
    /// Level verdicts agree with the window's frequencies.
    Trichotomy,
    /// `x <= F <= 4x` for the quad estimate `x`.
    Sandwich,
    LowProbes,
    TriProbes,
    /// Low-frequency tables use at most `2n` payload bits.
    MonotonePayload,
    /// Rank interval meets `[k - αs - 2, k + αs + 2]`.
    SelectSlack,
    /// Rank interval meets `[k - αs, k + αs]`, checked for `s >= ⌈8/α⌉`.
    SelectStrict,
}

const CHECKS: usize = 9;

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::ModeSound => "mode_sound",
            Check::ModeExact => "mode_exact",
            Check::Trichotomy => "trichotomy",
            Check::Sandwich => "sandwich",
            Check::LowProbes => "low_probes",
            Check::TriProbes => "tri_probes",
            Check::MonotonePayload => "monotone_payload",
            Check::SelectSlack => "select_slack",
            Check::SelectStrict => "select_strict",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckCount {
    pub checked: u64,
    pub failed: u64,
}

/// A failed check, located by sequence and window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub check: Check,
    pub family: Family,
    pub seed: u64,
    pub n: usize,
    pub param: f64,
    pub a: usize,
    pub b: usize,
    pub k: Option<usize>,
    pub detail: String,
}

/// Accumulated results of a sweep.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Sweep {
    pub sequences: u64,
    pub windows: u64,
    pub queries: u64,
    counts: [CheckCount; CHECKS],
    pub violation_count: u64,
    /// The first [`Sweep::KEEP`] violations.
    pub violations: Vec<Violation>,
    pub max_low_probes: u32,
    pub max_tri_probes: u32,
}

impl Sweep {
    pub const KEEP: usize = 20;

    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    fn check(&mut self, c: Check, ok: bool, violation: impl FnOnce() -> Violation) {
        let slot = &mut self.counts[c as usize];
        slot.checked += 1;
        if !ok {
            slot.failed += 1;
            self.violation_count += 1;
            if self.violations.len() < Self::KEEP {
                self.violations.push(violation());
            }
        }
    }

    pub fn count(&self, c: Check) -> CheckCount {
        self.counts[c as usize]
    }

    /// Counts of every check that ran.
    pub fn checks(&self) -> BTreeMap<&'static str, CheckCount> {
        ALL_CHECKS
            .iter()
            .map(|&c| (c.name(), self.count(c)))
            .filter(|(_, n)| n.checked > 0)
            .collect()
    }

    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }

    pub fn merge(&mut self, other: Sweep) {
        self.sequences += other.sequences;
        self.windows += other.windows;
        self.queries += other.queries;
        for (x, y) in self.counts.iter_mut().zip(other.counts) {
            x.checked += y.checked;
            x.failed += y.failed;
        }
        self.violation_count += other.violation_count;
        let room = Self::KEEP - self.violations.len();
        self.violations.extend(other.violations.into_iter().take(room));
        self.max_low_probes = self.max_low_probes.max(other.max_low_probes);
        self.max_tri_probes = self.max_tri_probes.max(other.max_tri_probes);
    }
}

const ALL_CHECKS: [Check; CHECKS] = [
    Check::ModeSound,
    Check::ModeExact,
    Check::Trichotomy,
    Check::Sandwich,
    Check::LowProbes,
    Check::TriProbes,
    Check::MonotonePayload,
    Check::SelectSlack,
    Check::SelectStrict,
];

/// Runs `f` on every item (in parallel) and merges in corpus order.
pub fn sweep_all<F>(items: &[CorpusItem], f: F) -> Result<Sweep>
where
    F: Fn(&CorpusItem, &mut Sweep) -> Result<()> + Sync,
{
    let parts: Vec<Result<Sweep>> = items
        .par_iter()
        .map(|it| {
            let mut sw = Sweep::new();
            f(it, &mut sw).map(|_| sw)
        })
        .collect();
    let mut total = Sweep::new();
    for p in parts {
        total.merge(p?);
    }
    Ok(total)
}

fn dense(seq: &[Color]) -> (Vec<usize>, usize) {
    let mut map = HashMap::new();
    let ids = seq
        .iter()
        .map(|c| {
            let next = map.len();
            *map.entry(*c).or_insert(next)
        })
        .collect();
    (ids, map.len())
}

const TOL: f64 = 1e-12;

/// Checks the static index with parameter `eps` on every window of `item`.
pub fn sweep_static(item: &CorpusItem, eps: f64, sw: &mut Sweep) -> Result<()> {
    let seq = &item.seq;
    let n = seq.len();
    let idx = StaticModeIndex::build(seq, eps)?;
    let (ids, sigma) = dense(seq);
    let (low_budget, tri_budget) = (idx.low_probe_budget(), idx.tri_probe_budget());
    let exact_cap = ceil_tol(1.0 / eps) as usize;
    let root = (1.0 + eps).sqrt();
    let bands: Vec<f64> = idx.levels().iter().map(|l| band(eps, l.params().k)).collect();
    let at = |a: usize, b: usize, check: Check, detail: String| Violation {
        check,
        family: item.family,
        seed: item.seed,
        n,
        param: eps,
        a,
        b,
        k: None,
        detail,
    };
    sw.sequences += 1;
    for t in idx.low().tables() {
        let bits = t.space().payload;
        sw.check(Check::MonotonePayload, bits <= 2 * t.len().max(1), || {
            at(1, n, Check::MonotonePayload, format!("{bits} payload bits for {} values", t.len()))
        });
    }
    let mut counts = vec![0usize; sigma];
    for a in 1..=n {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut big = 0;
        for b in a..=n {
            let c = &mut counts[ids[b - 1]];
            *c += 1;
            big = big.max(*c);
            sw.windows += 1;
            sw.queries += 1;
            let (p, st) = idx.query_with_stats(a, b)?;
            let fp = if (a..=b).contains(&p) { counts[ids[p - 1]] } else { 0 };
            sw.check(Check::ModeSound, fp as f64 * (1.0 + eps) >= big as f64 * (1.0 - TOL), || {
                at(a, b, Check::ModeSound, format!("position {p} has frequency {fp}, mode {big}"))
            });
            if big <= exact_cap {
                sw.check(Check::ModeExact, fp == big, || {
                    at(a, b, Check::ModeExact, format!("frequency {fp}, mode {big}"))
                });
            }
            sw.max_low_probes = sw.max_low_probes.max(st.low_probes);
            sw.max_tri_probes = sw.max_tri_probes.max(st.tri_probes);
            sw.check(Check::LowProbes, st.low_probes <= low_budget, || {
                at(a, b, Check::LowProbes, format!("{} probes, budget {low_budget}", st.low_probes))
            });
            sw.check(Check::TriProbes, st.tri_probes <= tri_budget, || {
                at(a, b, Check::TriProbes, format!("{} probes, budget {tri_budget}", st.tri_probes))
            });
            let (x, _) = idx.quad().query(a, b)?;
            sw.check(Check::Sandwich, x >= 1 && x <= big && big <= 4 * x, || {
                at(a, b, Check::Sandwich, format!("estimate {x}, mode {big}"))
            });
            for (lv, &xk) in idx.levels().iter().zip(&bands) {
                let (verdict, _) = lv.classify(a, b);
                let freq_at = |w: usize| if (a..=b).contains(&w) { counts[ids[w - 1]] as f64 } else { 0.0 };
                let f = big as f64;
                let ok = match verdict {
                    Trichotomy::Below => f < xk * (1.0 + TOL),
                    Trichotomy::Above { witness } => freq_at(witness) > xk * (1.0 - TOL),
                    Trichotomy::Within { witness } => {
                        freq_at(witness) > xk / root * (1.0 - TOL) && f < xk * root * (1.0 + TOL)
                    }
                };
                sw.check(Check::Trichotomy, ok, || {
                    at(a, b, Check::Trichotomy, format!("level {} says {verdict:?}, mode {big}", lv.params().k))
                });
            }
        }
    }
    Ok(())
}

/// Sorted window contents, grown one element at a time.
struct Window(Vec<Color>);

impl Window {
    fn push(&mut self, v: Color) {
        let i = self.0.partition_point(|&x| x <= v);
        self.0.insert(i, v);
    }

    /// `[1 + #{< v}, #{<= v}]`.
    fn rank_interval(&self, v: Color) -> (usize, usize) {
        (self.0.partition_point(|&x| x < v) + 1, self.0.partition_point(|&x| x <= v))
    }
}

fn select_checks(
    sw: &mut Sweep,
    item: &CorpusItem,
    alpha: f64,
    win: &Window,
    (a, b, k): (usize, usize, usize),
    p: usize,
) {
    let seq = &item.seq;
    let s = b - a + 1;
    let (lo, hi) = if (a..=b).contains(&p) { win.rank_interval(seq[p - 1]) } else { (usize::MAX, 0) };
    let r = alpha * s as f64;
    let meets = |slack: f64| hi as f64 >= k as f64 - r - slack - 1e-9 && lo as f64 <= k as f64 + r + slack + 1e-9;
    let at = |check| Violation {
        check,
        family: item.family,
        seed: item.seed,
        n: seq.len(),
        param: alpha,
        a,
        b,
        k: Some(k),
        detail: format!("position {p} has rank interval [{lo}, {hi}]"),
    };
    sw.check(Check::SelectSlack, meets(2.0), || at(Check::SelectSlack));
    if s as u64 >= ceil_tol(8.0 / alpha) {
        sw.check(Check::SelectStrict, meets(0.0), || at(Check::SelectStrict));
    }
}

pub fn sweep_fixed(item: &CorpusItem, alpha: f64, f: RankFunction, sw: &mut Sweep) -> Result<()> {
    let seq = &item.seq;
    let sel = FixedRankSelector::build(seq, alpha, f)?;
    sw.sequences += 1;
    for a in 1..=seq.len() {
        let mut win = Window(Vec::with_capacity(seq.len()));
        for b in a..=seq.len() {
            win.push(seq[b - 1]);
            sw.windows += 1;
            sw.queries += 1;
            let p = sel.query(a, b)?;
            select_checks(sw, item, alpha, &win, (a, b, f.eval(b - a + 1)), p);
        }
    }
    Ok(())
}

pub fn sweep_online(item: &CorpusItem, alpha: f64, sw: &mut Sweep) -> Result<()> {
    let seq = &item.seq;
    let sel = OnlineRankSelector::build(seq, alpha)?;
    sw.sequences += 1;
    for a in 1..=seq.len() {
        let mut win = Window(Vec::with_capacity(seq.len()));
        for b in a..=seq.len() {
            win.push(seq[b - 1]);
            sw.windows += 1;
            for k in 1..=b - a + 1 {
                sw.queries += 1;
                let p = sel.query(a, b, k)?;
                select_checks(sw, item, alpha, &win, (a, b, k), p);
            }
        }
    }
    Ok(())
}
