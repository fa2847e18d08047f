//! Structural invariant checks for [`DynamicMode`].

use super::dominance::{Coords, Point};
use super::dynamic::{dense_point, DynamicMode, Interval, PositionTable};
use super::params::LevelSpec;
use crate::{Color, Error, Result};

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::Logic(msg))
}

impl DynamicMode {
    /// Checks the occurrence list and every sparse level of one color.
    pub fn check_color(&self, color: Color) -> Result<()> {
        let Some(state) = self.states.get(&color) else {
            return Ok(());
        };
        let f = self.occ.size(state.root);
        if f == 0 {
            return fail(format!("color {color} kept with no occurrences"));
        }
        let mut prev = 0;
        for (i, o) in self.occ.in_order(state.root).into_iter().enumerate() {
            let e = self.occ_elem[o as usize];
            if self.colors[e as usize] != color || self.elem_occ[e as usize] != o {
                return fail(format!("occurrence {} of color {color} is inconsistent", i + 1));
            }
            let p = self.seq.rank(e);
            if p <= prev {
                return fail(format!("occurrences of color {color} out of order"));
            }
            prev = p;
        }
        for (idx, ivs) in state.sparse.iter().enumerate() {
            let spec = self.params.level(self.params.dense_cutoff + idx as u32);
            self.check_sparse(color, spec, f, ivs)?;
        }
        Ok(())
    }

    fn check_sparse(&self, color: Color, spec: &LevelSpec, f: usize, ivs: &[Interval]) -> Result<()> {
        let j = spec.j;
        if f < spec.min_occurrences() {
            if !ivs.is_empty() {
                return fail(format!("color {color} level {j}: intervals on an inactive level"));
            }
            return Ok(());
        }
        if ivs.is_empty() {
            return fail(format!("color {color} level {j}: active level has no intervals"));
        }
        let rank = |o: u32| self.occ.rank(o);
        let mut last_start = 0;
        for (k, iv) in ivs.iter().enumerate() {
            let (s, e) = (rank(iv.start), rank(iv.end));
            let size = e.checked_sub(s).unwrap_or(usize::MAX);
            if size < spec.size_lo || size > spec.size_hi {
                return fail(format!(
                    "color {color} level {j} interval {k}: size {size} outside [{}, {}]",
                    spec.size_lo, spec.size_hi
                ));
            }
            if iv.pot as usize != e - s + 1 {
                return fail(format!(
                    "color {color} level {j} interval {k}: pot {} but spans {}",
                    iv.pot,
                    e - s + 1
                ));
            }
            if !iv.live {
                return fail(format!("color {color} level {j} interval {k}: no D-point"));
            }
            if k == 0 {
                if s - 1 > spec.gap_lo {
                    return fail(format!("color {color} level {j}: left slack {}", s - 1));
                }
            } else {
                let g = s - last_start;
                if g < spec.gap_lo || g > spec.gap_hi {
                    return fail(format!("color {color} level {j} interval {k}: gap {g}"));
                }
            }
            last_start = s;
        }
        let tail = f - rank(ivs[ivs.len() - 1].end);
        if tail > spec.gap_lo {
            return fail(format!("color {color} level {j}: right slack {tail}"));
        }
        Ok(())
    }

    /// Full check: every color, plus equality of the stored D-points with
    /// the points the interval sets call for.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.len();
        let mut total = 0;
        let mut expected = Vec::new();
        for (&color, state) in &self.states {
            self.check_color(color)?;
            let f = self.occ.size(state.root);
            total += f;
            for spec in self.params.active_levels(f) {
                if spec.dense {
                    for r in 1..=f + 1 - spec.size_lo {
                        expected.push(dense_point(&self.occ, &self.occ_elem, state.root, spec, color, r));
                    }
                }
            }
            for (idx, ivs) in state.sparse.iter().enumerate() {
                let level = self.params.dense_cutoff + idx as u32;
                expected.extend(ivs.iter().map(|iv| Point {
                    level,
                    start: self.occ_elem[iv.start as usize],
                    end: self.occ_elem[iv.end as usize],
                    color,
                }));
            }
        }
        if total != n {
            return fail(format!("occurrence lists hold {total} elements, sequence {n}"));
        }
        let order = self.seq.in_order(self.seq_root);
        if order.windows(2).any(|w| self.labels[w[0] as usize] >= self.labels[w[1] as usize]) {
            return fail("order labels are not increasing".into());
        }
        let pos = self.positions();
        let key = |p: &Point, pos: &PositionTable| (p.level, pos.position(p.start), pos.position(p.end), p.color);
        let mut stored = self.dominance_points();
        expected.sort_by_key(|p| key(p, &pos));
        stored.sort_by_key(|p| key(p, &pos));
        if expected != stored {
            let first = expected
                .iter()
                .zip(&stored)
                .position(|(a, b)| a != b)
                .unwrap_or(expected.len().min(stored.len()));
            return fail(format!(
                "D holds {} points, intervals call for {} (first difference at {first})",
                stored.len(),
                expected.len()
            ));
        }
        Ok(())
    }
}
