use crate::error::check_range;
use crate::succinct::wire::Reader;
use crate::succinct::{PackedInts, SpaceBits};
use crate::{crossing_node, Color, Error, Result};

use super::dense_ids;

/// Frequency estimator with `x <= F <= 4x`.
///
/// The sequence is viewed as padded to a power of two. A node of height `h`
/// covers `2^(h+1)` positions and its left half ends at `t`. For `j = 0..=h`
/// it keeps `e_j`, the largest `e` with `F(c[e..=t]) >= 2^j`, and `e'_j`, the
/// smallest `e` with `F(c[t+1..=e]) >= 2^j`. Both are stored as distances
/// from the midpoint in `h+1` bits each, `0` meaning absent. Nodes whose
/// right half starts past `n` are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadApproxIndex {
    n: usize,
    /// `heights[h]` holds `2(h+1)` slots per node: left slots, then right.
    heights: Vec<PackedInts>,
}

impl QuadApproxIndex {
    pub fn build(seq: &[Color]) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::InvalidParameter("empty sequence".into()));
        }
        let n = seq.len();
        let (ids, sigma) = dense_ids(seq);
        let mut count = vec![0usize; sigma];
        let levels = n.next_power_of_two().trailing_zeros();
        let mut heights = Vec::with_capacity(levels as usize);
        for h in 0..levels {
            let half = 1usize << h;
            let slots = h as usize + 1;
            let nodes = node_count(n, h);
            let mut table = PackedInts::zeros(h + 1, nodes * 2 * slots);
            for m in 0..nodes {
                let base = m * 2 * half;
                let t = base + half;
                let off = m * 2 * slots;
                // Left side: walk down from t.
                let mut f = 0;
                for e in (base + 1..=t).rev() {
                    let c = &mut count[ids[e - 1] as usize];
                    *c += 1;
                    if *c > f {
                        f = *c;
                        if f.is_power_of_two() {
                            table.set(off + f.trailing_zeros() as usize, (t - e + 1) as u64);
                        }
                    }
                }
                for e in base + 1..=t {
                    count[ids[e - 1] as usize] = 0;
                }
                // Right side: walk up from t+1.
                let end = (t + half).min(n);
                f = 0;
                for e in t + 1..=end {
                    let c = &mut count[ids[e - 1] as usize];
                    *c += 1;
                    if *c > f {
                        f = *c;
                        if f.is_power_of_two() {
                            table.set(off + slots + f.trailing_zeros() as usize, (e - t) as u64);
                        }
                    }
                }
                for e in t + 1..=end {
                    count[ids[e - 1] as usize] = 0;
                }
            }
            heights.push(table);
        }
        Ok(Self { n, heights })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Stored distance of left (`right = false`) or right sample `j` of the
    /// node `(h, t)`; `0` if absent.
    pub fn sample(&self, h: u32, t: usize, right: bool, j: usize) -> usize {
        let slots = h as usize + 1;
        let m = (t - (1 << h)) >> (h + 1);
        self.heights[h as usize].get(m * 2 * slots + usize::from(right) * slots + j) as usize
    }

    /// Estimate `x` and the number of sample lookups.
    pub fn query(&self, a: usize, b: usize) -> Result<(usize, u32)> {
        check_range(a, b, self.n)?;
        if a == b {
            return Ok((1, 0));
        }
        let (h, t) = crossing_node(a, b);
        let mut probes = 0;
        // Sample 0 always qualifies on both sides, so search j in [0, h].
        let mut largest = |right: bool, limit: usize| {
            let (mut lo, mut hi) = (0usize, h as usize);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                probes += 1;
                let d = self.sample(h, t, right, mid);
                if d != 0 && d <= limit {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            lo
        };
        let j1 = largest(false, t - a + 1);
        let j2 = largest(true, b - t);
        Ok((1 << j1.max(j2), probes))
    }

    pub fn space(&self) -> SpaceBits {
        SpaceBits {
            payload: self.heights.iter().map(|p| p.bits()).sum(),
            directory: 0,
        }
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.heights.len() as u32).to_le_bytes());
        for p in &self.heights {
            p.write_to(out);
        }
    }

    pub(crate) fn read_from(r: &mut Reader<'_>, n: usize) -> Result<Self> {
        let levels = r.u32()?;
        if levels != n.next_power_of_two().trailing_zeros() {
            return Err(Error::Format("quad index height does not match n".into()));
        }
        let mut heights = Vec::with_capacity(levels as usize);
        for h in 0..levels {
            let p = PackedInts::read_from(r)?;
            if p.width() != h + 1 || p.len() != node_count(n, h) * 2 * (h as usize + 1) {
                return Err(Error::Format(format!("quad index height {h} is malformed")));
            }
            heights.push(p);
        }
        Ok(Self { n, heights })
    }
}

/// Nodes of height `h` whose midpoint `t` satisfies `t < n`.
fn node_count(n: usize, h: u32) -> usize {
    let half = 1usize << h;
    if n <= half {
        0
    } else {
        (n - half - 1) / (2 * half) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn sample_examples() {
        let q = QuadApproxIndex::build(&[1, 2, 1, 2]).unwrap();
        // Root: h = 1, t = 2.
        assert_eq!(2 - q.sample(1, 2, false, 0) + 1, 2);
        assert_eq!(q.sample(1, 2, true, 0) + 2, 3);
        assert_eq!(q.sample(1, 2, true, 1), 0);
        assert_eq!(q.query(1, 4).unwrap().0, 1);

        let q = QuadApproxIndex::build(&[5, 5, 5, 5]).unwrap();
        assert_eq!(2 - q.sample(1, 2, false, 0) + 1, 2);
        assert_eq!(2 - q.sample(1, 2, false, 1) + 1, 1);
        assert_eq!(q.sample(1, 2, true, 0) + 2, 3);
        assert_eq!(q.sample(1, 2, true, 1) + 2, 4);
        assert_eq!(q.query(1, 4).unwrap().0, 2);
        assert_eq!(q.query(3, 3).unwrap().0, 1);

        let q = QuadApproxIndex::build(&[8]).unwrap();
        assert_eq!(q.space().total(), 0);
        assert_eq!(q.query(1, 1).unwrap().0, 1);

        let q = QuadApproxIndex::build(&[1; 16]).unwrap();
        assert!(matches!(q.query(1, 16).unwrap().0, 8 | 16));
    }

    #[test]
    fn node_counts() {
        assert_eq!(node_count(1, 0), 0);
        assert_eq!(node_count(2, 0), 1);
        assert_eq!(node_count(3, 0), 1);
        assert_eq!(node_count(4, 0), 2);
        assert_eq!(node_count(5, 1), 1);
        assert_eq!(node_count(4, 2), 0);
    }

    proptest! {
        #[test]
        fn sandwich(seq in proptest::collection::vec(1u64..4, 1..70)) {
            let q = QuadApproxIndex::build(&seq).unwrap();
            let n = seq.len();
            for a in 1..=n {
                for b in a..=n {
                    let f = oracle::exact_mode(&seq, a, b).unwrap().1;
                    let x = q.query(a, b).unwrap().0;
                    prop_assert!(x <= f && f <= 4 * x, "x={} F={} at ({}, {})", x, f, a, b);
                }
            }
        }
    }
}
