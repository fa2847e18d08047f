//! Placement of replacement intervals on a sparse level, in occurrence
//! ranks.

use super::params::LevelSpec;

/// What bounds a rebuilt stretch on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Left {
    /// Start of the level: the first start must be within `gap_lo` of 1.
    Head,
    /// Surviving interval `[start, end]`.
    Anchor { start: usize, end: usize },
}

/// What bounds a rebuilt stretch on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Right {
    /// End of the level: the last end must be within `gap_lo` of `f`.
    Tail,
    /// Surviving interval starting at `start`.
    Anchor { start: usize },
}

/// `c >= 1` gaps in `[gap_lo, gap_hi]` summing to `d`, as close to the
/// rebuild step as possible.
pub(crate) fn split_gaps(d: usize, spec: &LevelSpec) -> Option<Vec<usize>> {
    if d == 0 {
        return None;
    }
    let cmin = d.div_ceil(spec.gap_hi).max(1);
    let cmax = d / spec.gap_lo;
    if cmin > cmax {
        return None;
    }
    let c = ((d as f64 / spec.step as f64).round() as usize).clamp(cmin, cmax);
    let (q, r) = (d / c, d % c);
    Some((0..c).map(|i| q + usize::from(i < r)).collect())
}

fn interval_at(start: usize, spec: &LevelSpec, f: usize) -> Option<(usize, usize)> {
    let end = (start + spec.width - 1).min(f);
    (end + 1 - start > spec.size_lo).then_some((start, end))
}

/// Starts after `from`, one per gap except the last.
fn starts_between(from: usize, gaps: &[usize]) -> Vec<usize> {
    let mut s = from;
    gaps[..gaps.len() - 1]
        .iter()
        .map(|g| {
            s += g;
            s
        })
        .collect()
}

/// New intervals strictly between the two bounds, or `None` if no valid
/// placement exists.
pub(crate) fn layout(left: Left, right: Right, f: usize, spec: &LevelSpec) -> Option<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    match (left, right) {
        (Left::Anchor { start: sl, .. }, Right::Anchor { start: sr }) => {
            let gaps = split_gaps(sr.checked_sub(sl)?, spec)?;
            for s in starts_between(sl, &gaps) {
                out.push(interval_at(s, spec, f)?);
            }
        }
        (Left::Head, Right::Anchor { start: sr }) => {
            if sr - 1 > spec.gap_lo {
                let gaps = split_gaps(sr - 1, spec)?;
                out.push(interval_at(1, spec, f)?);
                for s in starts_between(1, &gaps) {
                    out.push(interval_at(s, spec, f)?);
                }
            }
        }
        (Left::Anchor { start: sl, end: el }, Right::Tail) => {
            match tail_from(sl, f, spec) {
                Some(v) => out = v,
                None if el + spec.gap_lo >= f => {}
                None => return None,
            }
        }
        (Left::Head, Right::Tail) => {
            if f <= spec.size_lo {
                return Some(out);
            }
            if f <= spec.size_hi + 1 {
                out.push((1, f));
                return Some(out);
            }
            let first = interval_at(1, spec, f)?;
            out.push(first);
            out.extend(tail_from(1, f, spec)?);
        }
    }
    Some(out)
}

/// Intervals after an anchor starting at `sl`, the last one ending at `f`.
fn tail_from(sl: usize, f: usize, spec: &LevelSpec) -> Option<Vec<(usize, usize)>> {
    // The last start keeps its size in range; try starts nearest the one
    // giving a full-width last interval.
    let lo = f.checked_sub(spec.size_hi)?.max(sl + spec.gap_lo);
    let hi = f.checked_sub(spec.size_lo)?;
    if lo > hi {
        return None;
    }
    let target = (f + 1).saturating_sub(spec.width).clamp(lo, hi);
    let candidates = (0..=hi - lo).flat_map(|d| [target.checked_sub(d), target.checked_add(d)]);
    for sc in candidates.flatten().filter(|&s| (lo..=hi).contains(&s)) {
        let Some(gaps) = split_gaps(sc - sl, spec) else {
            continue;
        };
        let mut out = Vec::with_capacity(gaps.len());
        let mut ok = true;
        for s in starts_between(sl, &gaps) {
            match interval_at(s, spec, f) {
                Some(iv) => out.push(iv),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push((sc, f));
            return Some(out);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_dynamic::DynParams;

    fn check(ivs: &[(usize, usize)], f: usize, spec: &LevelSpec) {
        assert!(!ivs.is_empty());
        assert!(ivs[0].0 - 1 <= spec.gap_lo);
        assert!(f - ivs.last().unwrap().1 <= spec.gap_lo);
        for w in ivs.windows(2) {
            let g = w[1].0 - w[0].0;
            assert!(g >= spec.gap_lo && g <= spec.gap_hi, "gap {g} in {ivs:?}");
        }
        for &(s, e) in ivs {
            assert!(e <= f);
            let pot = e - s + 1;
            assert!(pot > spec.size_lo && pot <= spec.size_hi + 1, "pot {pot}");
        }
    }

    #[test]
    fn full_relayout_is_always_valid() {
        for eps in [1.0, 0.5, 0.25] {
            let mut p = DynParams::new(eps, 1).unwrap();
            p.ensure(3000);
            for spec in p.levels().iter().filter(|l| !l.dense) {
                for f in spec.size_lo + 1..=3000.min(spec.size_lo * 12) {
                    let ivs = layout(Left::Head, Right::Tail, f, spec)
                        .unwrap_or_else(|| panic!("eps {eps} level {} f {f}", spec.j));
                    check(&ivs, f, spec);
                }
            }
        }
    }

    #[test]
    fn gap_split() {
        let p = DynParams::new(1.0, 1000).unwrap();
        let spec = p.level(p.dense_cutoff + 4);
        for d in spec.gap_lo..200 {
            let g = split_gaps(d, spec).unwrap();
            assert_eq!(g.iter().sum::<usize>(), d);
            assert!(g.iter().all(|&x| x >= spec.gap_lo && x <= spec.gap_hi));
        }
        assert!(split_gaps(0, spec).is_none());
    }
}
