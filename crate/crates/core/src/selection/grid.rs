//! Sample windows around the midpoints of the dyadic recursion.

use crate::{ceil_tol, Color};

/// Sorted distinct offsets `{0} ∪ {⌈base^i⌉ : i >= 0}` up to a bound.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Offsets {
    values: Vec<usize>,
}

impl Offsets {
    pub fn new(base: f64, max: usize) -> Self {
        let mut values = vec![0];
        let mut p = 1.0f64;
        loop {
            let v = ceil_tol(p) as usize;
            if v > max {
                break;
            }
            if v != *values.last().unwrap() {
                values.push(v);
            }
            p *= base;
        }
        Self { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Number of offsets `<= x`.
    #[inline]
    pub fn count_le(&self, x: usize) -> usize {
        self.values.partition_point(|&v| v <= x)
    }
}

/// Nodes of height `h` with midpoint `t < n`.
pub(crate) fn node_count(n: usize, h: u32) -> usize {
    let half = 1usize << h;
    if n <= half {
        0
    } else {
        (n - half - 1) / (2 * half) + 1
    }
}

/// Order-statistic sweep over windows `[t - oi, t + 1 + oj]` of one node.
pub(crate) struct NodeSweep {
    base: usize,
    /// Local value ids of node positions, indexed by `pos - base - 1`.
    local: Vec<u32>,
    tree: Vec<u32>,
    first: Vec<usize>,
    log: u32,
}

impl NodeSweep {
    /// Node covering positions `base+1 ..= min(base + width, n)`.
    pub fn new(seq: &[Color], base: usize, width: usize) -> Self {
        let end = (base + width).min(seq.len());
        let vals = &seq[base..end];
        let mut distinct: Vec<Color> = vals.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let local = vals
            .iter()
            .map(|v| distinct.binary_search(v).unwrap() as u32)
            .collect();
        let d = distinct.len();
        Self {
            base,
            local,
            tree: vec![0; d + 1],
            first: vec![usize::MAX; d],
            log: usize::BITS - d.leading_zeros(),
        }
    }

    pub fn clear(&mut self) {
        self.tree.iter_mut().for_each(|c| *c = 0);
        self.first.iter_mut().for_each(|p| *p = usize::MAX);
    }

    pub fn insert(&mut self, pos: usize) {
        let v = self.local[pos - self.base - 1] as usize;
        self.first[v] = self.first[v].min(pos);
        let mut i = v + 1;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    /// Smallest window position holding the value of the `k`-th smallest
    /// element (1-based `k`).
    pub fn kth(&self, k: usize) -> usize {
        let mut idx = 0;
        let mut rem = k as u32;
        let mut step = 1usize << self.log;
        while step > 0 {
            let next = idx + step;
            if next < self.tree.len() && self.tree[next] < rem {
                idx = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        self.first[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets() {
        assert_eq!(Offsets::new(1.1, 3).values(), &[0, 1, 2, 3]);
        assert_eq!(Offsets::new(2.0, 20).values(), &[0, 1, 2, 4, 8, 16]);
        assert_eq!(Offsets::new(2.0, 0).values(), &[0]);
        let o = Offsets::new(1.5, 100);
        assert_eq!(o.count_le(0), 1);
        assert!(o.values().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sweep_selects() {
        let seq = [5, 3, 5, 1, 3];
        let mut sw = NodeSweep::new(&seq, 0, 8);
        for p in 1..=5 {
            sw.insert(p);
        }
        // Sorted: 1(4) 3(2) 3(5) 5(1) 5(3)
        let got: Vec<usize> = (1..=5).map(|k| sw.kth(k)).collect();
        assert_eq!(got, vec![4, 2, 2, 1, 1]);
        sw.clear();
        sw.insert(3);
        assert_eq!(sw.kth(1), 3);
    }
}
