use serde::Serialize;

use crate::error::check_epsilon;
use crate::{ceil_tol, floor_tol, Result};

/// Integer parameters of level `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSpec {
    pub j: u32,
    /// Every occurrence anchors an interval of exactly `size_lo` occurrences.
    pub dense: bool,
    pub size_lo: usize,
    pub size_hi: usize,
    pub gap_lo: usize,
    pub gap_hi: usize,
    /// Occurrences per interval laid by a rebuild.
    pub width: usize,
    /// Start gap used by a rebuild.
    pub step: usize,
}

impl LevelSpec {
    /// Least occurrence count at which a sparse level holds intervals.
    pub fn min_occurrences(&self) -> usize {
        if self.dense {
            self.size_lo
        } else {
            self.size_lo + 1
        }
    }
}

/// `δ = (1+ε)^(1/3) = 1+ε'` and the level table derived from it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DynParams {
    pub epsilon: f64,
    pub delta: f64,
    pub eps_prime: f64,
    /// Levels below this are dense.
    pub dense_cutoff: u32,
    levels: Vec<LevelSpec>,
}

impl DynParams {
    pub fn new(epsilon: f64, n_hint: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        let delta = (1.0 + epsilon).cbrt();
        let eps_prime = delta - 1.0;
        let target = 2.0 / eps_prime;
        let mut j = 0u32;
        while delta.powi(j as i32) < target * (1.0 - 1e-12) {
            j += 1;
        }
        let mut p = Self {
            epsilon,
            delta,
            eps_prime,
            dense_cutoff: j + 3,
            levels: Vec::new(),
        };
        p.ensure(n_hint.max(1));
        Ok(p)
    }

    fn spec(&self, j: u32) -> LevelSpec {
        let dj = self.delta.powi(j as i32);
        let e = self.eps_prime;
        let size_lo = ceil_tol(dj) as usize;
        let size_hi = (ceil_tol(dj * self.delta) as usize).max(size_lo + 2);
        let gap_lo = (floor_tol(e * dj / 2.0) as usize).max(1);
        let gap_hi = (2 * gap_lo).max(ceil_tol(e * dj) as usize);
        LevelSpec {
            j,
            dense: j < self.dense_cutoff,
            size_lo,
            size_hi,
            gap_lo,
            gap_hi,
            width: (ceil_tol((1.0 + e / 2.0) * dj) as usize).max(size_lo + 1),
            step: gap_lo.max((gap_hi - 1).min(floor_tol(0.75 * e * dj) as usize)),
        }
    }

    /// Extends the table until the last level needs more than `f`
    /// occurrences.
    pub fn ensure(&mut self, f: usize) {
        while self
            .levels
            .last()
            .is_none_or(|l| l.min_occurrences() <= f)
        {
            let j = self.levels.len() as u32 + 1;
            self.levels.push(self.spec(j));
        }
    }

    /// Level `j >= 1`.
    #[inline]
    pub fn level(&self, j: u32) -> &LevelSpec {
        &self.levels[j as usize - 1]
    }

    pub fn levels(&self) -> &[LevelSpec] {
        &self.levels
    }

    /// Levels that hold intervals for a color with `f` occurrences.
    pub fn active_levels(&self, f: usize) -> impl Iterator<Item = &LevelSpec> {
        self.levels
            .iter()
            .take_while(move |l| l.min_occurrences() <= f)
    }
}
