//! The default verification corpus of short sequences.

use std::collections::HashSet;

use serde::Serialize;

use crate::generators::{gen_adversarial_median, gen_adversarial_mode, gen_random, mode_block_half, random_bits};
use crate::Color;

/// Which generator produced a corpus sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Uniform over `sigma` colors.
    Random { sigma: usize },
    /// Uniform over `n` colors.
    RandomWide,
    AdversarialMode,
    AdversarialMedian,
    /// Read from a sequence file.
    File,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusItem {
    pub family: Family,
    pub seed: u64,
    pub seq: Vec<Color>,
}

/// Every `n <= nmax` with alphabets 1, 2, 4 and `n`, seeds `0..seeds`, plus
/// both lower-bound families with random bits. Duplicate sequences are kept
/// once, under their first family and seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub nmax: usize,
    pub seeds: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self { nmax: 64, seeds: 200 }
    }
}

impl CorpusSpec {
    pub fn build(&self) -> Vec<CorpusItem> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut push = |family, seed, seq: Vec<Color>| {
            if seen.insert(seq.clone()) {
                out.push(CorpusItem { family, seed, seq });
            }
        };
        let k = mode_block_half(1.0);
        for n in 1..=self.nmax {
            for seed in 0..self.seeds {
                let mix = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ n as u64;
                for sigma in [1, 2, 4] {
                    push(Family::Random { sigma }, seed, gen_random(n, sigma, mix).unwrap());
                }
                push(Family::RandomWide, seed, gen_random(n, n, mix).unwrap());
                let bits = random_bits(n / (2 * k), mix);
                push(Family::AdversarialMode, seed, gen_adversarial_mode(n, 1.0, &bits).unwrap());
                let bits = random_bits(n / 2, mix);
                push(Family::AdversarialMedian, seed, gen_adversarial_median(n, &bits).unwrap());
            }
        }
        out
    }
}
