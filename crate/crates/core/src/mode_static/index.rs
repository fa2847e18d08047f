use serde::Serialize;

use crate::error::{check_epsilon, check_range};
use crate::succinct::SpaceBits;
use crate::{Color, Error, Result};

use super::{dense_ids, Level, LevelParams, LowFreqIndex, LowOutcome, QuadApproxIndex, Trichotomy};

/// Lookups spent by one query, per component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    /// Low-frequency table reads.
    pub low_probes: u32,
    /// Quad sample reads.
    pub quad_probes: u32,
    /// Level classifications.
    pub tri_probes: u32,
}

/// Stored bits by component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceReport {
    pub n: usize,
    pub epsilon: f64,
    pub levels_built: usize,
    pub low: SpaceBits,
    pub levels: SpaceBits,
    pub quad: SpaceBits,
    pub total_bits: usize,
}

/// Static `(1+ε)`-approximate range mode index over a fixed sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct StaticModeIndex {
    n: usize,
    epsilon: f64,
    low: LowFreqIndex,
    levels: Vec<Level>,
    /// `T_k` for every built level plus the first unbuilt one.
    thresholds: Vec<usize>,
    quad: QuadApproxIndex,
}

/// Level parameters for `k = 0..` while `T_k <= n`, plus `T` of the first
/// level past the end.
pub(crate) fn level_plan(n: usize, epsilon: f64) -> (Vec<LevelParams>, Vec<usize>) {
    let mut params = Vec::new();
    let mut thresholds = Vec::new();
    for k in 0u32.. {
        let p = LevelParams::new(epsilon, k);
        thresholds.push(p.t);
        if p.t > n {
            break;
        }
        params.push(p);
    }
    (params, thresholds)
}

impl StaticModeIndex {
    pub fn build(seq: &[Color], epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if seq.is_empty() {
            return Err(Error::InvalidParameter("empty sequence".into()));
        }
        let n = seq.len();
        let low = LowFreqIndex::build(seq, epsilon)?;
        let quad = QuadApproxIndex::build(seq)?;
        let (ids, sigma) = dense_ids(seq);
        let mut count = vec![0usize; sigma];
        let (plan, thresholds) = level_plan(n, epsilon);
        let levels = plan
            .into_iter()
            .map(|p| Level::build(&ids, p, &mut count))
            .collect::<Result<_>>()?;
        Ok(Self {
            n,
            epsilon,
            low,
            levels,
            thresholds,
            quad,
        })
    }

    pub(crate) fn from_parts(
        n: usize,
        epsilon: f64,
        low: LowFreqIndex,
        levels: Vec<Level>,
        quad: QuadApproxIndex,
    ) -> Result<Self> {
        let (plan, thresholds) = level_plan(n, epsilon);
        if plan.len() != levels.len() || low.kmax() != crate::ceil_tol(1.0 / epsilon) as usize {
            return Err(Error::Format("components disagree on n or epsilon".into()));
        }
        Ok(Self {
            n,
            epsilon,
            low,
            levels,
            thresholds,
            quad,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn low(&self) -> &LowFreqIndex {
        &self.low
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn quad(&self) -> &QuadApproxIndex {
        &self.quad
    }

    /// Position of a `(1+ε)`-approximate mode of `c[a..=b]`.
    pub fn query(&self, a: usize, b: usize) -> Result<usize> {
        self.query_with_stats(a, b).map(|(p, _)| p)
    }

    pub fn query_with_stats(&self, a: usize, b: usize) -> Result<(usize, QueryStats)> {
        check_range(a, b, self.n)?;
        let mut stats = QueryStats::default();
        let (low, probes) = self.low.query(a, b)?;
        stats.low_probes = probes;
        if let LowOutcome::Exact { position, .. } = low {
            return Ok((position, stats));
        }

        let (x, probes) = self.quad.query(a, b)?;
        stats.quad_probes = probes;
        // Here F > ⌈1/ε⌉ = T_0, so level 0 exists and F >= T_klo.
        let built = self.levels.len();
        let klo = self.thresholds[..built]
            .partition_point(|&t| t <= x)
            .saturating_sub(1);
        let khi = self.thresholds[..built].partition_point(|&t| t <= 4 * x);
        debug_assert!(klo < khi);

        // Last k in [klo, khi) with F >= T_k; F < T_khi holds by the sandwich
        // or because T_khi > n.
        let (mut lo, mut hi) = (klo, khi - 1);
        let mut above: Option<(usize, usize)> = None;
        let classify = |k: usize, stats: &mut QueryStats| {
            stats.tri_probes += 1;
            self.levels[k].classify(a, b).0
        };
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            match classify(mid, &mut stats) {
                Trichotomy::Below => hi = mid - 1,
                Trichotomy::Above { witness } => {
                    lo = mid;
                    above = Some((mid, witness));
                }
                Trichotomy::Within { witness } => return Ok((witness, stats)),
            }
        }
        match above {
            Some((k, witness)) if k == lo => Ok((witness, stats)),
            _ => match classify(lo, &mut stats) {
                Trichotomy::Above { witness } | Trichotomy::Within { witness } => {
                    Ok((witness, stats))
                }
                Trichotomy::Below => Err(Error::Logic(format!(
                    "level {lo} reports Below for [{a}, {b}] with estimate {x}"
                ))),
            },
        }
    }

    /// Trichotomy probe budget `⌈lg⌈lg_{1+ε} 4⌉⌉ + 3`.
    pub fn tri_probe_budget(&self) -> u32 {
        let m = crate::ceil_tol(4f64.ln() / (1.0 + self.epsilon).ln()) as f64;
        m.log2().ceil() as u32 + 3
    }

    /// Low-frequency probe budget `⌈lg⌈1/ε⌉⌉ + 2`.
    pub fn low_probe_budget(&self) -> u32 {
        (self.low.kmax() as f64).log2().ceil() as u32 + 2
    }

    pub fn space(&self) -> SpaceReport {
        let low = self.low.space();
        let levels: SpaceBits = self.levels.iter().map(|l| l.space()).sum();
        let quad = self.quad.space();
        SpaceReport {
            n: self.n,
            epsilon: self.epsilon,
            levels_built: self.levels.len(),
            low,
            levels,
            quad,
            total_bits: (low + levels + quad).total(),
        }
    }
}
