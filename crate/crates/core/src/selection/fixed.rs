use crate::error::{check_alpha, check_range};
use crate::succinct::wire::Reader;
use crate::succinct::{PackedInts, SpaceBits};
use crate::{crossing_node, Color, Error, Result};

use super::grid::{node_count, NodeSweep, Offsets};
use super::RankFunction;

/// Selector for the rank `f(s)` fixed at build time.
///
/// A node of height `h` with midpoint `t` stores, for every offset pair
/// `(oi, oj)`, the answer for window `[t - oi, t + 1 + oj]` as an
/// `(h+1)`-bit position relative to the node start. A query uses the largest
/// sample window inside `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedRankSelector {
    n: usize,
    alpha: f64,
    f: RankFunction,
    offsets: Offsets,
    heights: Vec<PackedInts>,
}

impl FixedRankSelector {
    pub fn build(seq: &[Color], alpha: f64, f: RankFunction) -> Result<Self> {
        check_alpha(alpha)?;
        if seq.is_empty() {
            return Err(Error::InvalidParameter("empty sequence".into()));
        }
        let n = seq.len();
        let offsets = Offsets::new(1.0 + alpha, n);
        let levels = n.next_power_of_two().trailing_zeros();
        let mut heights = Vec::with_capacity(levels as usize);
        for h in 0..levels {
            let half = 1usize << h;
            let nodes = node_count(n, h);
            let full = offsets.count_le(half - 1);
            let mut table = PackedInts::with_capacity(h + 1, nodes * full * full);
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
                        let p = sweep.kth(f.eval(oi + oj + 2));
                        table.push((p - base - 1) as u64);
                    }
                }
            }
            heights.push(table);
        }
        Ok(Self {
            n,
            alpha,
            f,
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

    pub fn rank_function(&self) -> RankFunction {
        self.f
    }

    /// Position of an element whose rank in `c[a..=b]` is within `α·s` of
    /// `f(s)` (up to two extra ranks on short windows).
    pub fn query(&self, a: usize, b: usize) -> Result<usize> {
        check_range(a, b, self.n)?;
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
        let m = base / (2 * half);
        let slot = m * full * full + i * rcount + j;
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
        out.extend_from_slice(b"AFRS");
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&self.alpha.to_bits().to_le_bytes());
        let (tag, k) = self.f.id();
        out.push(tag);
        out.extend_from_slice(&k.to_le_bytes());
        out.extend_from_slice(&(self.heights.len() as u32).to_le_bytes());
        for p in &self.heights {
            p.write_to(&mut out);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.bytes(4)? != b"AFRS" {
            return Err(Error::Format("missing AFRS magic".into()));
        }
        let n = r.u64()? as usize;
        let alpha = r.f64()?;
        check_alpha(alpha).map_err(|e| Error::Format(e.to_string()))?;
        let f = RankFunction::from_id(r.u8()?, r.u64()?).map_err(|e| Error::Format(e.to_string()))?;
        let levels = r.u32()?;
        if n == 0 || levels != n.next_power_of_two().trailing_zeros() {
            return Err(Error::Format("selector height does not match n".into()));
        }
        let offsets = Offsets::new(1.0 + alpha, n);
        let mut heights = Vec::with_capacity(levels as usize);
        for h in 0..levels {
            let p = PackedInts::read_from(&mut r)?;
            let half = 1usize << h;
            let nodes = node_count(n, h);
            let full = offsets.count_le(half - 1);
            let last_t = (nodes - 1) * 2 * half + half;
            let expect =
                (nodes - 1) * full * full + full * offsets.count_le((half - 1).min(n - last_t - 1));
            if p.width() != h + 1 || p.len() != expect {
                return Err(Error::Format(format!("selector height {h} is malformed")));
            }
            heights.push(p);
        }
        r.finish()?;
        Ok(Self {
            n,
            alpha,
            f,
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
    fn examples() {
        let asc: Vec<Color> = (1..=8).collect();
        let sel = FixedRankSelector::build(&asc, 0.1, RankFunction::Median).unwrap();
        // Root t = 4; window [4, 5] has median rank 1, at position 4.
        assert_eq!(sel.query(4, 5).unwrap(), 4);
        assert_eq!(sel.query(1, 8).unwrap(), 4);
        assert_eq!(sel.query(6, 6).unwrap(), 6);

        let sel = FixedRankSelector::build(&[3, 9], 0.25, RankFunction::Max).unwrap();
        assert_eq!(sel.space().payload, 1);
        assert_eq!(sel.query(1, 2).unwrap(), 2);

        let sel = FixedRankSelector::build(&[7; 13], 0.3, RankFunction::Median).unwrap();
        for a in 1..=13 {
            for b in a..=13 {
                let p = sel.query(a, b).unwrap();
                assert!(a <= p && p <= b);
            }
        }
        assert!(FixedRankSelector::build(&[1], 0.5, RankFunction::Min).is_err());
    }

    #[test]
    fn serialization_roundtrip() {
        let seq: Vec<Color> = (0..77).map(|i| (i * 31 % 11) as Color).collect();
        let sel = FixedRankSelector::build(&seq, 0.2, RankFunction::Const(3)).unwrap();
        let back = FixedRankSelector::from_bytes(&sel.to_bytes()).unwrap();
        assert_eq!(back, sel);
        assert!(FixedRankSelector::from_bytes(&sel.to_bytes()[..20]).is_err());
    }

    proptest! {
        #[test]
        fn rank_window(
            seq in proptest::collection::vec(1u64..6, 1..48),
            alpha in prop_oneof![Just(0.4), Just(0.25), Just(0.1)],
            f in prop_oneof![Just(RankFunction::Median), Just(RankFunction::Min), Just(RankFunction::Max)],
        ) {
            let sel = FixedRankSelector::build(&seq, alpha, f).unwrap();
            let n = seq.len();
            for a in 1..=n {
                for b in a..=n {
                    let s = b - a + 1;
                    let k = f.eval(s) as f64;
                    let p = sel.query(a, b).unwrap();
                    prop_assert!(a <= p && p <= b);
                    let (lo, hi) = oracle::rank_interval(&seq, a, b, seq[p - 1]);
                    let slack = alpha * s as f64;
                    prop_assert!(lo as f64 <= k + slack && hi as f64 >= k - slack,
                        "({}, {}) rank [{}, {}] target {}", a, b, lo, hi, k);
                }
            }
        }
    }
}
