use crate::error::{check_alpha, check_range};
use crate::succinct::wire::Reader;
use crate::succinct::{PackedInts, SpaceBits};
use crate::{crossing_node, Color, Error, Result};

use super::grid::{node_count, NodeSweep, Offsets};

/// Selector for a rank given with each query.
///
/// Offsets grow by `1 + α/2`. For each sample window of size `s_W` and
/// `l = 0..=⌊1/α⌋`, the node stores the positions of ranks `⌊q_l⌋` and
/// `⌈q_l⌉`, where `q_l = l·α·s_W + 1` is clamped to `s_W`.
#[derive(Clone, Debug, PartialEq)]
pub struct OnlineRankSelector {
    n: usize,
    alpha: f64,
    steps: usize,
    offsets: Offsets,
    heights: Vec<PackedInts>,
}

/// The two ranks sampled for `q_l` in a window of size `s`.
fn sample_ranks(alpha: f64, l: usize, s: usize) -> (usize, usize) {
    let q = (l as f64 * alpha * s as f64 + 1.0).min(s as f64);
    let lo = crate::floor_tol(q) as usize;
    let hi = crate::ceil_tol(q) as usize;
    (lo.clamp(1, s), hi.clamp(1, s))
}

impl OnlineRankSelector {
    pub fn build(seq: &[Color], alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if seq.is_empty() {
            return Err(Error::InvalidParameter("empty sequence".into()));
        }
        let n = seq.len();
        let steps = crate::floor_tol(1.0 / alpha) as usize;
        let per_pair = 2 * (steps + 1);
        let offsets = Offsets::new(1.0 + alpha / 2.0, n);
        let levels = n.next_power_of_two().trailing_zeros();
        let mut heights = Vec::with_capacity(levels as usize);
        for h in 0..levels {
            let half = 1usize << h;
            let nodes = node_count(n, h);
            let full = offsets.count_le(half - 1);
            let mut table = PackedInts::with_capacity(h + 1, nodes * full * full * per_pair);
            for m in 0..nodes {
                let base = m * 2 * half;
                let t = base + half;
                let lefts = &offsets.values()[..full];
                let rights = &offsets.values()[..offsets.count_le((half - 1).min(n - t - 1))];
                let mut sweep = NodeSweep::new(seq, base, 2 * half);
                for &oi in lefts {
                    sweep.clear();
                    for p in t - oi..=t {
                        sweep.insert(p);
                    }
                    let mut next = t + 1;
                    for &oj in rights {
                        while next <= t + 1 + oj {
                            sweep.insert(next);
                            next += 1;
                        }
                        let s = oi + oj + 2;
                        for l in 0..=steps {
                            let (lo, hi) = sample_ranks(alpha, l, s);
                            table.push((sweep.kth(lo) - base - 1) as u64);
                            table.push((sweep.kth(hi) - base - 1) as u64);
                        }
                    }
                }
            }
            heights.push(table);
        }
        Ok(Self {
            n,
            alpha,
            steps,
            offsets,
            heights,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Position of an element whose rank in `c[a..=b]` is within `α·s` of
    /// `k` (up to two extra ranks on short windows).
    pub fn query(&self, a: usize, b: usize, k: usize) -> Result<usize> {
        check_range(a, b, self.n)?;
        let size = b - a + 1;
        if k == 0 || k > size {
            return Err(Error::RankOutOfRange { k, size });
        }
        if a == b {
            return Ok(a);
        }
        let (h, t) = crossing_node(a, b);
        let half = 1usize << h;
        let base = t - half;
        let full = self.offsets.count_le(half - 1);
        let rcount = self.offsets.count_le((half - 1).min(self.n - t - 1));
        let i = self.offsets.count_le(t - a) - 1;
        let j = self.offsets.count_le(b - t - 1) - 1;
        let s = self.offsets.values()[i] + self.offsets.values()[j] + 2;

        // q_l nearest to k; q_l is increasing in l.
        let guess = ((k - 1) as f64 / (self.alpha * s as f64)).floor() as usize;
        let q = |l: usize| (l as f64 * self.alpha * s as f64 + 1.0).min(s as f64);
        let l = [guess.saturating_sub(1), guess, guess + 1]
            .into_iter()
            .filter(|&l| l <= self.steps)
            .min_by(|&x, &y| (q(x) - k as f64).abs().total_cmp(&(q(y) - k as f64).abs()))
            .unwrap_or(self.steps);
        let (lo, hi) = sample_ranks(self.alpha, l, s);
        let pick = if k.abs_diff(hi) < k.abs_diff(lo) { 1 } else { 0 };

        let m = base / (2 * half);
        let slot = ((m * full * full + i * rcount + j) * (self.steps + 1) + l) * 2 + pick;
        debug_assert!(slot < self.heights[h as usize].len());
        Ok(base + 1 + self.heights[h as usize].get(slot) as usize)
    }

    pub fn space(&self) -> SpaceBits {
        SpaceBits {
            payload: self.heights.iter().map(|p| p.bits()).sum(),
            directory: 0,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"AORS");
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&self.alpha.to_bits().to_le_bytes());
        out.extend_from_slice(&(self.heights.len() as u32).to_le_bytes());
        for p in &self.heights {
            p.write_to(&mut out);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.bytes(4)? != b"AORS" {
            return Err(Error::Format("missing AORS magic".into()));
        }
        let n = r.u64()? as usize;
        let alpha = r.f64()?;
        check_alpha(alpha).map_err(|e| Error::Format(e.to_string()))?;
        let levels = r.u32()?;
        if n == 0 || levels != n.next_power_of_two().trailing_zeros() {
            return Err(Error::Format("selector height does not match n".into()));
        }
        let steps = crate::floor_tol(1.0 / alpha) as usize;
        let offsets = Offsets::new(1.0 + alpha / 2.0, n);
        let mut heights = Vec::with_capacity(levels as usize);
        for h in 0..levels {
            let p = PackedInts::read_from(&mut r)?;
            let half = 1usize << h;
            let nodes = node_count(n, h);
            let full = offsets.count_le(half - 1);
            let last_t = (nodes - 1) * 2 * half + half;
            let pairs =
                (nodes - 1) * full * full + full * offsets.count_le((half - 1).min(n - last_t - 1));
            if p.width() != h + 1 || p.len() != pairs * 2 * (steps + 1) {
                return Err(Error::Format(format!("selector height {h} is malformed")));
            }
            heights.push(p);
        }
        r.finish()?;
        Ok(Self {
            n,
            alpha,
            steps,
            offsets,
            heights,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn sampled_ranks() {
        let s = 8;
        let ranks: Vec<_> = (0..=2).map(|l| sample_ranks(0.5, l, s)).collect();
        assert_eq!(ranks, vec![(1, 1), (5, 5), (8, 8)]);
        let ranks: Vec<_> = (0..=4).map(|l| sample_ranks(0.25, l, s).0).collect();
        assert_eq!(ranks, vec![1, 3, 5, 7, 8]);
        assert_eq!(sample_ranks(0.3, 1, 5), (2, 3));
    }

    #[test]
    fn examples() {
        let asc: Vec<Color> = (1..=8).collect();
        let sel = OnlineRankSelector::build(&asc, 0.1).unwrap();
        assert_eq!(sel.query(1, 8, 1).unwrap(), 1);
        assert_eq!(sel.query(1, 8, 8).unwrap(), 8);
        assert_eq!(sel.query(5, 5, 1).unwrap(), 5);
        assert!(matches!(sel.query(1, 8, 9), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(sel.query(1, 8, 0), Err(Error::RankOutOfRange { .. })));

        let sel = OnlineRankSelector::build(&[4, 2], 0.25).unwrap();
        assert_eq!(sel.query(1, 2, 1).unwrap(), 2);
        assert_eq!(sel.query(1, 2, 2).unwrap(), 1);
    }

    #[test]
    fn serialization_roundtrip() {
        let seq: Vec<Color> = (0..50).map(|i| (i * 17 % 13) as Color).collect();
        let sel = OnlineRankSelector::build(&seq, 0.3).unwrap();
        assert_eq!(OnlineRankSelector::from_bytes(&sel.to_bytes()).unwrap(), sel);
    }

    proptest! {
        #[test]
        fn rank_window(
            seq in proptest::collection::vec(1u64..9, 1..40),
            alpha in prop_oneof![Just(0.4), Just(0.25), Just(0.1)],
        ) {
            let sel = OnlineRankSelector::build(&seq, alpha).unwrap();
            let n = seq.len();
            let strict_from = (8.0 / alpha).ceil() as usize;
            for a in 1..=n {
                for b in a..=n {
                    let s = b - a + 1;
                    for k in 1..=s {
                        let p = sel.query(a, b, k).unwrap();
                        prop_assert!(a <= p && p <= b);
                        let (lo, hi) = oracle::rank_interval(&seq, a, b, seq[p - 1]);
                        let extra = if s >= strict_from { 0.0 } else { 2.0 };
                        let slack = alpha * s as f64 + extra;
                        prop_assert!(lo as f64 <= k as f64 + slack && hi as f64 >= k as f64 - slack,
                            "({}, {}, {}) rank [{}, {}]", a, b, k, lo, hi);
                    }
                }
            }
        }
    }
}
