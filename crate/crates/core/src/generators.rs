//! Test corpora: seeded random and Zipf sequences, and the two lower-bound
//! families that encode one bit per block.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mode_static::StaticModeIndex;
use crate::selection::{FixedRankSelector, RankFunction};
use crate::{ceil_tol, Color, Error, Result};

fn check_sizes(n: usize, sigma: usize) -> Result<()> {
    if n == 0 || sigma == 0 {
        return Err(Error::InvalidParameter(format!(
            "n and alphabet size must be positive, got n={n}, sigma={sigma}"
        )));
    }
    Ok(())
}

/// Uniform colors in `1..=sigma`.
pub fn gen_random(n: usize, sigma: usize, seed: u64) -> Result<Vec<Color>> {
    check_sizes(n, sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| rng.random_range(1..=sigma as Color)).collect())
}

/// Colors in `1..=sigma` with `P(i) ∝ i^-skew`.
pub fn gen_zipf(n: usize, sigma: usize, skew: f64, seed: u64) -> Result<Vec<Color>> {
    check_sizes(n, sigma)?;
    if !(skew >= 0.0 && skew.is_finite()) {
        return Err(Error::InvalidParameter(format!("skew must be >= 0, got {skew}")));
    }
    let weights = (1..=sigma).map(|i| (i as f64).powf(-skew));
    let dist = WeightedIndex::new(weights).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| dist.sample(&mut rng) as Color + 1).collect())
}

/// `count` seeded random bits.
pub fn random_bits(count: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random()).collect()
}

/// Half block length `k = ⌈1+ε⌉ + 1` of the mode family.
pub fn mode_block_half(epsilon: f64) -> usize {
    ceil_tol(1.0 + epsilon) as usize + 1
}

/// Mode lower-bound family: each block of `2k` holds color 1 repeated `k`
/// times and colors `2..=k+1` once each; bit 0 puts the repeated run first,
/// bit 1 last. A trailing partial block is filled with color 1.
pub fn gen_adversarial_mode(n: usize, epsilon: f64, bits: &[bool]) -> Result<Vec<Color>> {
    crate::error::check_epsilon(epsilon)?;
    let k = mode_block_half(epsilon);
    let blocks = n / (2 * k);
    if bits.len() != blocks {
        return Err(Error::LengthMismatch {
            expected: blocks,
            actual: bits.len(),
        });
    }
    let mut seq = Vec::with_capacity(n);
    for &bit in bits {
        let run = std::iter::repeat_n(1, k);
        let singles = 2..=(k as Color + 1);
        if bit {
            seq.extend(singles.chain(run));
        } else {
            seq.extend(run.chain(singles));
        }
    }
    seq.resize(n, 1);
    Ok(seq)
}

/// Median lower-bound family: blocks `[1, 2]` (bit 0) or `[2, 1]` (bit 1),
/// with a trailing `1` when `n` is odd.
pub fn gen_adversarial_median(n: usize, bits: &[bool]) -> Result<Vec<Color>> {
    if bits.len() != n / 2 {
        return Err(Error::LengthMismatch {
            expected: n / 2,
            actual: bits.len(),
        });
    }
    let mut seq: Vec<Color> = bits
        .iter()
        .flat_map(|&b| if b { [2, 1] } else { [1, 2] })
        .collect();
    seq.resize(n, 1);
    Ok(seq)
}

/// Recovers the bits of a mode-family sequence from its index alone. In each
/// block the mode has frequency `k` and every other color frequency 1, so a
/// `(1+ε)`-approximate answer must be a position of the repeated run.
pub fn reconstruct_mode_bits(index: &StaticModeIndex, n: usize, epsilon: f64) -> Result<Vec<bool>> {
    let k = mode_block_half(epsilon);
    (0..n / (2 * k))
        .map(|b| {
            let start = b * 2 * k + 1;
            let p = index.query(start, start + 2 * k - 1)?;
            Ok(p >= start + k)
        })
        .collect()
}

/// Recovers the bits of a median-family sequence: on a block of two, an
/// `α < 1/2` answer must be the exact lower median, which is color 1.
pub fn reconstruct_median_bits(selector: &FixedRankSelector, n: usize) -> Result<Vec<bool>> {
    if selector.rank_function() != RankFunction::Median {
        return Err(Error::InvalidParameter("selector must use the median".into()));
    }
    (0..n / 2)
        .map(|b| {
            let start = 2 * b + 1;
            Ok(selector.query(start, start + 1)? == start + 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_is_seeded() {
        assert_eq!(gen_random(4, 1, 9).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(gen_random(3, 3, 5).unwrap(), gen_random(3, 3, 5).unwrap());
        assert_ne!(gen_random(64, 3, 5).unwrap(), gen_random(64, 3, 6).unwrap());
        assert!(gen_random(0, 3, 5).is_err());
        let z = gen_zipf(500, 4, 1.2, 3).unwrap();
        assert!(z.iter().all(|&c| (1..=4).contains(&c)));
    }

    #[test]
    fn zipf_skew_zero_is_uniform() {
        let z = gen_zipf(40_000, 4, 0.0, 11).unwrap();
        for c in 1..=4 {
            let share = z.iter().filter(|&&x| x == c).count() as f64 / 40_000.0;
            assert!((share - 0.25).abs() < 0.02, "color {c}: {share}");
        }
    }

    #[test]
    fn mode_family() {
        assert_eq!(gen_adversarial_mode(6, 1.0, &[false]).unwrap(), vec![1, 1, 1, 2, 3, 4]);
        assert_eq!(gen_adversarial_mode(6, 1.0, &[true]).unwrap(), vec![2, 3, 4, 1, 1, 1]);
        assert_eq!(gen_adversarial_mode(5, 1.0, &[]).unwrap(), vec![1; 5]);
        assert!(matches!(
            gen_adversarial_mode(12, 1.0, &[true]),
            Err(Error::LengthMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn median_family() {
        assert_eq!(gen_adversarial_median(4, &[false, true]).unwrap(), vec![1, 2, 2, 1]);
        assert_eq!(gen_adversarial_median(2, &[false]).unwrap(), vec![1, 2]);
        assert_eq!(gen_adversarial_median(3, &[true]).unwrap(), vec![2, 1, 1]);
        assert!(gen_adversarial_median(4, &[true]).is_err());
    }

    #[test]
    fn reconstruction_roundtrips() {
        for eps in [1.0, 0.5, 0.1] {
            let k = mode_block_half(eps);
            let n = 2 * k * 9 + 1;
            for bits in [vec![false; 9], random_bits(9, 4)] {
                let seq = gen_adversarial_mode(n, eps, &bits).unwrap();
                let idx = StaticModeIndex::build(&seq, eps).unwrap();
                assert_eq!(reconstruct_mode_bits(&idx, n, eps).unwrap(), bits);
            }
        }
        for (n, bits) in [(2, vec![false]), (8, vec![true, true, false, false])] {
            let seq = gen_adversarial_median(n, &bits).unwrap();
            let sel = FixedRankSelector::build(&seq, 0.49, RankFunction::Median).unwrap();
            assert_eq!(reconstruct_median_bits(&sel, n).unwrap(), bits);
        }
    }
}
