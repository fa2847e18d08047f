//! Space and probe measurements over `(n, parameter)` grids, with fitted
//! growth exponents.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::generators::gen_random;
use crate::mode_dynamic::{random_script, replay, DynamicMode, ReplayOptions, ReplayReport};
use crate::selection::{FixedRankSelector, OnlineRankSelector, RankFunction};
use crate::succinct::SpaceBits;
use crate::mode_static::StaticModeIndex;
use crate::Result;

/// Version of every JSON report.
pub const SCHEMA: u32 = 1;

/// Alphabet of generated benchmark sequences.
pub const BENCH_SIGMA: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeSummary {
    pub min: u32,
    pub median: u32,
    pub max: u32,
}

impl ProbeSummary {
    pub fn of(values: &mut [u32]) -> Option<Self> {
        values.sort_unstable();
        Some(Self {
            min: *values.first()?,
            median: values[values.len() / 2],
            max: *values.last()?,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    /// ε for mode structures, α for selectors.
    pub param: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Wall time, informational only.
    pub build_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes: Option<ProbeSummary>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub components: BTreeMap<String, SpaceBits>,
    pub total_bits: usize,
    /// `total_bits` over the asymptotic bound without its constant.
    pub normalized: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub updates: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub touches: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema: u32,
    pub structure: String,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    pub fits: BTreeMap<String, f64>,
    pub criteria: BTreeMap<String, bool>,
}

impl BenchReport {
    fn new(structure: &str, seed: u64) -> Self {
        Self {
            schema: SCHEMA,
            structure: structure.into(),
            seed,
            rows: Vec::new(),
            fits: BTreeMap::new(),
            criteria: BTreeMap::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.criteria.values().all(|&v| v)
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Ratios `total(2n) / total(n)` for rows sharing a parameter.
fn doubling_ratios(rows: &[BenchRow]) -> Vec<f64> {
    let mut out = Vec::new();
    for r in rows {
        if let Some(d) = rows.iter().find(|d| d.param == r.param && d.n == 2 * r.n) {
            out.push(d.total_bits as f64 / r.total_bits as f64);
        }
    }
    out
}

fn add_doubling(rep: &mut BenchReport, lo: f64, hi: f64) {
    let ratios = doubling_ratios(&rep.rows);
    if ratios.is_empty() {
        return;
    }
    let (min, max) = ratios.iter().fold((f64::MAX, 0f64), |(a, b), &r| (a.min(r), b.max(r)));
    rep.fits.insert("doubling_ratio_min".into(), min);
    rep.fits.insert("doubling_ratio_max".into(), max);
    rep.criteria.insert("doubling_ratio_in_band".into(), min >= lo && max <= hi);
}

/// Fits the exponent of `1/param` at each `n`, returning the largest.
fn add_param_exponent(rep: &mut BenchReport, limit: f64) {
    let mut ns: Vec<usize> = rep.rows.iter().map(|r| r.n).collect();
    ns.dedup();
    let mut worst: Option<f64> = None;
    for n in ns {
        let pts: Vec<(f64, f64)> = rep
            .rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| (1.0 / r.param, r.total_bits as f64))
            .collect();
        if pts.len() >= 2 {
            let e = fit_exponent(&pts);
            rep.fits.insert(format!("inverse_param_exponent_n{n}"), e);
            worst = Some(worst.map_or(e, |w: f64| w.max(e)));
        }
    }
    if let Some(w) = worst {
        rep.fits.insert("inverse_param_exponent_max".into(), w);
        rep.criteria.insert(format!("inverse_param_exponent_le_{limit}"), w <= limit);
    }
}

/// Space and probe counts of the static index. Rows are normalized by
/// `n/ε`; the band criterion asks for `max/min <= 4` over the grid.
pub fn bench_static(ns: &[usize], epsilons: &[f64], seed: u64, queries: usize) -> Result<BenchReport> {
    let mut rep = BenchReport::new("static-mode", seed);
    let mut within_budget = true;
    for &eps in epsilons {
        for &n in ns {
            let seq = gen_random(n, BENCH_SIGMA, seed)?;
            let t = Instant::now();
            let idx = StaticModeIndex::build(&seq, eps)?;
            let build_ms = ms(t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            let mut probes = Vec::with_capacity(queries);
            for _ in 0..queries {
                let a = rng.random_range(1..=n);
                let b = rng.random_range(a..=n);
                let (_, st) = idx.query_with_stats(a, b)?;
                within_budget &= st.tri_probes <= idx.tri_probe_budget() && st.low_probes <= idx.low_probe_budget();
                probes.push(st.low_probes + st.quad_probes + st.tri_probes);
            }
            let s = idx.space();
            rep.rows.push(BenchRow {
                n,
                param: eps,
                build_ms,
                probes: ProbeSummary::of(&mut probes),
                components: [("low", s.low), ("levels", s.levels), ("quad", s.quad)]
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), v))
                    .collect(),
                total_bits: s.total_bits,
                normalized: s.total_bits as f64 / (n as f64 / eps),
                ..Default::default()
            });
        }
    }
    let (lo, hi) = rep
        .rows
        .iter()
        .fold((f64::MAX, 0f64), |(a, b), r| (a.min(r.normalized), b.max(r.normalized)));
    rep.fits.insert("band_low".into(), lo);
    rep.fits.insert("band_high".into(), hi);
    rep.criteria.insert("space_band_ratio_le_4".into(), hi <= 4.0 * lo);
    add_doubling(&mut rep, 1.6, 2.5);
    for &eps in epsilons {
        let pts: Vec<(f64, f64)> = rep
            .rows
            .iter()
            .filter(|r| r.param == eps)
            .map(|r| (r.n as f64, r.total_bits as f64))
            .collect();
        if pts.len() >= 2 {
            rep.fits.insert(format!("n_exponent_eps{eps}"), fit_exponent(&pts));
        }
    }
    if queries > 0 {
        rep.criteria.insert("probe_budgets".into(), within_budget);
    }
    Ok(rep)
}

/// Fixed-rank selector space, normalized by `n/α²`.
pub fn bench_fixed(ns: &[usize], alphas: &[f64], f: RankFunction, seed: u64) -> Result<BenchReport> {
    let mut rep = BenchReport::new("fixed-select", seed);
    for &alpha in alphas {
        for &n in ns {
            let seq = gen_random(n, BENCH_SIGMA, seed)?;
            let t = Instant::now();
            let sel = FixedRankSelector::build(&seq, alpha, f)?;
            let build_ms = ms(t);
            let total = sel.space().total();
            rep.rows.push(BenchRow {
                n,
                param: alpha,
                build_ms,
                total_bits: total,
                normalized: total as f64 / (n as f64 / (alpha * alpha)),
                ..Default::default()
            });
        }
    }
    add_doubling(&mut rep, 1.6, 2.5);
    add_param_exponent(&mut rep, 2.3);
    Ok(rep)
}

/// Online selector space, normalized by `n/α³`.
pub fn bench_online(ns: &[usize], alphas: &[f64], seed: u64) -> Result<BenchReport> {
    let mut rep = BenchReport::new("online-select", seed);
    for &alpha in alphas {
        for &n in ns {
            let seq = gen_random(n, BENCH_SIGMA, seed)?;
            let t = Instant::now();
            let sel = OnlineRankSelector::build(&seq, alpha)?;
            let build_ms = ms(t);
            let total = sel.space().total();
            rep.rows.push(BenchRow {
                n,
                param: alpha,
                build_ms,
                total_bits: total,
                normalized: total as f64 / (n as f64 / alpha.powi(3)),
                ..Default::default()
            });
        }
    }
    add_doubling(&mut rep, 1.6, 2.5);
    add_param_exponent(&mut rep, 3.3);
    Ok(rep)
}

/// Fitted constant of the touch bound `touches <= c·U·lg(n)/ε'²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TouchFit {
    /// Median of the per-script constants.
    pub c: f64,
    pub min: f64,
    pub max: f64,
    /// Every script's constant within ±50% of `c`.
    pub stable: bool,
}

/// `touches / (U·lg(n)/ε'²)` of one replay, `n` its largest length.
pub fn touch_constant(rep: &ReplayReport, eps_prime: f64) -> f64 {
    let u = rep.stats.updates().max(1) as f64;
    let lg = (rep.max_len.max(2) as f64).log2();
    rep.stats.touches as f64 / (u * lg / (eps_prime * eps_prime))
}

pub fn fit_touches(constants: &[f64]) -> Option<TouchFit> {
    let mut v = constants.to_vec();
    v.sort_by(f64::total_cmp);
    let c = *v.get(v.len() / 2)?;
    let (min, max) = (v[0], v[v.len() - 1]);
    Some(TouchFit {
        c,
        min,
        max,
        stable: min >= 0.5 * c && max <= 1.5 * c,
    })
}

/// Alphabet used by the `i`-th random script.
pub fn script_alphabet(i: usize) -> u64 {
    [2, 3, 4, 8][i % 4]
}

/// Replays `scripts` random scripts per ε with full checking.
pub fn bench_dynamic(epsilons: &[f64], scripts: usize, ops: usize, seed: u64) -> Result<BenchReport> {
    let mut rep = BenchReport::new("dynamic-mode", seed);
    let mut constants = Vec::new();
    let mut clean = true;
    for &eps in epsilons {
        for i in 0..scripts {
            let s = seed.wrapping_add(i as u64);
            let script = random_script(ops, script_alphabet(i), s);
            let mut d = DynamicMode::new(eps, ops)?;
            let t = Instant::now();
            let r = replay(&mut d, &script, ReplayOptions::default());
            let c = touch_constant(&r, d.params().eps_prime);
            constants.push(c);
            clean &= r.ok();
            rep.rows.push(BenchRow {
                n: r.max_len,
                param: eps,
                seed: Some(s),
                build_ms: ms(t),
                total_bits: 0,
                normalized: c,
                updates: Some(r.stats.updates()),
                touches: Some(r.stats.touches),
                violations: Some(r.violation_count),
                ..Default::default()
            });
        }
    }
    rep.criteria.insert("replays_clean".into(), clean);
    if let Some(fit) = fit_touches(&constants) {
        rep.fits.insert("touch_c".into(), fit.c);
        rep.fits.insert("touch_c_min".into(), fit.min);
        rep.fits.insert("touch_c_max".into(), fit.max);
        rep.criteria.insert("touch_c_stable".into(), fit.stable);
    }
    Ok(rep)
}
