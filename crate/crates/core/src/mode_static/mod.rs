//! Static `(1+ε)`-approximate range mode encoding.
//!
//! The index combines three parts:
//! - [`LowFreqIndex`] answers exactly when the mode frequency is at most
//!   `⌈1/ε⌉`;
//! - one [`Level`] per `k` decides whether the frequency is below, above or
//!   within a factor `sqrt(1+ε)` of `(1+ε)^k/ε`;
//! - [`QuadApproxIndex`] gives a 4-approximation of the frequency, which
//!   narrows the levels to search.

mod index;
mod level;
mod low_freq;
mod quad;
pub mod serial;

use std::collections::HashMap;

pub use index::{QueryStats, SpaceReport, StaticModeIndex};
pub use level::{band, Level, LevelParams, Trichotomy};
pub use low_freq::{LowFreqIndex, LowOutcome};
pub use quad::QuadApproxIndex;

use crate::Color;

/// Maps colors to `0..sigma` in order of first appearance.
pub(crate) fn dense_ids(seq: &[Color]) -> (Vec<u32>, usize) {
    let mut map: HashMap<Color, u32> = HashMap::new();
    let ids = seq
        .iter()
        .map(|&c| {
            let next = map.len() as u32;
            *map.entry(c).or_insert(next)
        })
        .collect();
    (ids, map.len())
}
