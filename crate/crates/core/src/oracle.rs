//! Brute-force answers used as ground truth by tests and `verify`.

use std::collections::HashMap;

use crate::error::check_range;
use crate::{Color, Error, Result};

/// `(position, frequency)` of an exact mode of `seq[a..=b]` (1-based). Ties go
/// to the color whose first occurrence in the window is leftmost.
pub fn exact_mode(seq: &[Color], a: usize, b: usize) -> Result<(usize, usize)> {
    check_range(a, b, seq.len())?;
    let mut counts: HashMap<Color, (usize, usize)> = HashMap::new();
    for (p, &c) in seq[a - 1..b].iter().enumerate() {
        counts.entry(c).or_insert((a + p, 0)).1 += 1;
    }
    let (pos, f) = counts
        .into_values()
        .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
        .expect("non-empty window");
    Ok((pos, f))
}

/// Occurrences of `color` in `seq[a..=b]`.
pub fn freq_of(seq: &[Color], a: usize, b: usize, color: Color) -> Result<usize> {
    check_range(a, b, seq.len())?;
    Ok(seq[a - 1..b].iter().filter(|&&c| c == color).count())
}

/// Rank interval `[1 + #{< v}, #{<= v}]` of value `v` within `seq[a..=b]`.
pub fn rank_interval(seq: &[Color], a: usize, b: usize, v: Color) -> (usize, usize) {
    let w = &seq[a - 1..b];
    let less = w.iter().filter(|&&c| c < v).count();
    let leq = less + w.iter().filter(|&&c| c == v).count();
    (less + 1, leq)
}

/// Position of the `k`-th smallest element of `seq[a..=b]` under the stable
/// (value, position) order, and that element's rank interval.
pub fn exact_select(seq: &[Color], a: usize, b: usize, k: usize) -> Result<(usize, (usize, usize))> {
    check_range(a, b, seq.len())?;
    let s = b - a + 1;
    if k == 0 || k > s {
        return Err(Error::RankOutOfRange { k, size: s });
    }
    let mut order: Vec<usize> = (a..=b).collect();
    order.sort_by_key(|&p| (seq[p - 1], p));
    let p = order[k - 1];
    Ok((p, rank_interval(seq, a, b, seq[p - 1])))
}
