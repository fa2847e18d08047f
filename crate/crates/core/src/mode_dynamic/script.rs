//! Update scripts: `I <pos> <color>`, `D <pos>`, `Q <a> <b>`, one per line.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dynamic::{DynAnswer, DynStats, DynamicMode};
use crate::{Color, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Op {
    Insert { pos: usize, color: Color },
    Delete { pos: usize },
    Query { a: usize, b: usize },
}

/// Parses a script. Blank lines and text after `#` are ignored.
pub fn parse_script(text: &str) -> Result<Vec<Op>> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Format(format!("line {}: {msg}: {raw:?}", i + 1));
        let mut it = line.split_whitespace();
        let tag = it.next().unwrap_or_default();
        let args: Vec<u64> = it
            .map(|t| t.parse::<u64>().map_err(|_| err("bad number")))
            .collect::<Result<_>>()?;
        let op = match (tag, args.as_slice()) {
            ("I", &[p, c]) => Op::Insert { pos: p as usize, color: c },
            ("D", &[p]) => Op::Delete { pos: p as usize },
            ("Q", &[a, b]) => Op::Query { a: a as usize, b: b as usize },
            ("I" | "D" | "Q", _) => return Err(err("wrong number of arguments")),
            _ => return Err(err("unknown operation")),
        };
        ops.push(op);
    }
    Ok(ops)
}

pub fn format_script(ops: &[Op]) -> String {
    let mut s = String::with_capacity(ops.len() * 12);
    for op in ops {
        let _ = match *op {
            Op::Insert { pos, color } => writeln!(s, "I {pos} {color}"),
            Op::Delete { pos } => writeln!(s, "D {pos}"),
            Op::Query { a, b } => writeln!(s, "Q {a} {b}"),
        };
    }
    s
}

/// Valid random script: half inserts, a quarter deletes, a quarter queries,
/// colors drawn from `0..alphabet`.
pub fn random_script(ops: usize, alphabet: u64, seed: u64) -> Vec<Op> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet = alphabet.max(1);
    let mut len = 0usize;
    let mut out = Vec::with_capacity(ops);
    while out.len() < ops {
        let roll = rng.random_range(0..4u8);
        let op = if len == 0 || roll < 2 {
            len += 1;
            Op::Insert {
                pos: rng.random_range(1..=len),
                color: rng.random_range(0..alphabet),
            }
        } else if roll == 2 {
            len -= 1;
            Op::Delete {
                pos: rng.random_range(1..=len + 1),
            }
        } else {
            let a = rng.random_range(1..=len);
            Op::Query {
                a,
                b: rng.random_range(a..=len),
            }
        };
        out.push(op);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayOptions {
    /// Check the updated color after every update.
    pub local_checks: bool,
    /// Run the full invariant check every this many ops (0 disables); it
    /// always runs once at the end.
    pub full_check_every: usize,
    /// Compare every dominance query with a linear scan.
    pub compare_dmax: bool,
}

impl Default for ReplayOptions {
    fn default() -> Self {
        Self {
            local_checks: true,
            full_check_every: 100,
            compare_dmax: true,
        }
    }
}

/// One query judged against the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QueryCheck {
    pub a: usize,
    pub b: usize,
    pub answer: DynAnswer,
    /// Frequency of the returned color in the window.
    pub freq: usize,
    /// Exact mode frequency of the window.
    pub mode_freq: usize,
}

impl QueryCheck {
    /// Violated query guarantees, as messages.
    pub fn violations(&self, d: &DynamicMode) -> Vec<String> {
        let mut out = Vec::new();
        let eps = d.epsilon();
        let (f, big) = (self.freq as f64, self.mode_freq as f64);
        let tag = format!("Q {} {}", self.a, self.b);
        if self.answer.position < self.a || self.answer.position > self.b {
            out.push(format!("{tag}: witness {} outside the window", self.answer.position));
        }
        if self.freq == 0 {
            out.push(format!("{tag}: color {} absent from the window", self.answer.color));
        }
        match self.answer.level {
            Some(j) => {
                let spec = d.params().level(j);
                if self.freq < spec.size_lo {
                    out.push(format!("{tag}: frequency {} below level {j} floor", self.freq));
                }
                if big >= d.params().delta.powi(j as i32 + 3) + 2.0 {
                    out.push(format!("{tag}: mode frequency {} above level {j} ceiling", self.mode_freq));
                }
            }
            None if self.mode_freq != 1 => {
                out.push(format!("{tag}: no level but mode frequency {}", self.mode_freq));
            }
            None => {}
        }
        let tol = 1e-9;
        if big >= (8.0 / (eps * eps)).ceil() && f * (1.0 + eps) < big * (1.0 - tol) {
            out.push(format!("{tag}: {} * (1+eps) < {}", self.freq, self.mode_freq));
        }
        if f * (1.0 + eps).powi(2) < big * (1.0 - tol) {
            out.push(format!("{tag}: {} * (1+eps)^2 < {}", self.freq, self.mode_freq));
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReplayReport {
    pub ops: usize,
    pub final_len: usize,
    pub max_len: usize,
    pub queries: usize,
    /// Queries whose answer was exact.
    pub exact: usize,
    /// Largest observed `F / freq`.
    pub worst_ratio: f64,
    pub full_checks: usize,
    pub violation_count: usize,
    /// The first violations, at most [`ReplayReport::KEEP`].
    pub violations: Vec<String>,
    pub stats: DynStats,
    /// Points in D at the end.
    pub points: usize,
}

impl ReplayReport {
    pub const KEEP: usize = 20;

    fn violation(&mut self, op: usize, msg: String) {
        self.violation_count += 1;
        if self.violations.len() < Self::KEEP {
            self.violations.push(format!("op {op}: {msg}"));
        }
    }

    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

fn window_counts(seq: &[Color], a: usize, b: usize, color: Color) -> (usize, usize) {
    let mut counts: HashMap<Color, usize> = HashMap::new();
    for &c in &seq[a - 1..b] {
        *counts.entry(c).or_default() += 1;
    }
    let mode = counts.values().copied().max().unwrap_or(0);
    (counts.get(&color).copied().unwrap_or(0), mode)
}

/// Runs `ops` on `d` alongside a plain vector and checks every answer and
/// the structure itself. Malformed ops (positions out of range) are
/// reported as violations and skipped.
pub fn replay(d: &mut DynamicMode, ops: &[Op], opts: ReplayOptions) -> ReplayReport {
    let mut mirror = d.to_vec();
    let mut rep = ReplayReport {
        ops: ops.len(),
        ..Default::default()
    };
    for (i, &op) in ops.iter().enumerate() {
        let n = i + 1;
        let touched = match op {
            Op::Insert { pos, color } => match d.insert(pos, color) {
                Ok(()) => {
                    mirror.insert(pos - 1, color);
                    Some(color)
                }
                Err(e) => {
                    rep.violation(n, e.to_string());
                    None
                }
            },
            Op::Delete { pos } => match d.delete(pos) {
                Ok(c) => {
                    let m = mirror.remove(pos - 1);
                    if m != c {
                        rep.violation(n, format!("deleted color {c}, expected {m}"));
                    }
                    Some(c)
                }
                Err(e) => {
                    rep.violation(n, e.to_string());
                    None
                }
            },
            Op::Query { a, b } => {
                match d.query(a, b) {
                    Ok(answer) => {
                        let (freq, mode_freq) = window_counts(&mirror, a, b, answer.color);
                        let qc = QueryCheck {
                            a,
                            b,
                            answer,
                            freq,
                            mode_freq,
                        };
                        rep.queries += 1;
                        rep.exact += usize::from(freq == mode_freq);
                        if freq > 0 {
                            rep.worst_ratio = rep.worst_ratio.max(mode_freq as f64 / freq as f64);
                        }
                        if mirror[answer.position - 1] != answer.color {
                            rep.violation(n, format!("Q {a} {b}: witness holds another color"));
                        }
                        for v in qc.violations(d) {
                            rep.violation(n, v);
                        }
                        if opts.compare_dmax {
                            let (fast, slow) = (d.dmax_query(a, b), d.dmax_linear(a, b));
                            if fast != slow {
                                rep.violation(n, format!("Q {a} {b}: dmax {fast:?}, linear scan {slow:?}"));
                            }
                        }
                    }
                    Err(e) => rep.violation(n, e.to_string()),
                }
                None
            }
        };
        rep.max_len = rep.max_len.max(mirror.len());
        if let (true, Some(c)) = (opts.local_checks, touched) {
            if let Err(e) = d.check_color(c) {
                rep.violation(n, e.to_string());
            }
        }
        if opts.full_check_every > 0 && n % opts.full_check_every == 0 {
            rep.full_checks += 1;
            if let Err(e) = d.check_invariants() {
                rep.violation(n, e.to_string());
            }
        }
    }
    rep.full_checks += 1;
    if let Err(e) = d.check_invariants() {
        rep.violation(ops.len(), e.to_string());
    }
    if d.to_vec() != mirror {
        rep.violation(ops.len(), "sequence differs from the mirror".into());
    }
    rep.final_len = mirror.len();
    rep.stats = d.stats();
    rep.points = d.point_count();
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        let text = "# header\nI 1 5\nI 2 7  # trailing\n\nQ 1 2\nD 1\n";
        let ops = parse_script(text).unwrap();
        assert_eq!(
            ops,
            vec![
                Op::Insert { pos: 1, color: 5 },
                Op::Insert { pos: 2, color: 7 },
                Op::Query { a: 1, b: 2 },
                Op::Delete { pos: 1 },
            ]
        );
        assert_eq!(parse_script(&format_script(&ops)).unwrap(), ops);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let e = parse_script("I 1 2\nX 3\n").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_script("I 1\n").unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
        assert!(parse_script("Q a b").is_err());
    }

    #[test]
    fn random_scripts_are_valid() {
        let ops = random_script(2000, 4, 9);
        let mut len = 0usize;
        for op in ops {
            match op {
                Op::Insert { pos, .. } => {
                    assert!(pos >= 1 && pos <= len + 1);
                    len += 1;
                }
                Op::Delete { pos } => {
                    assert!(pos >= 1 && pos <= len);
                    len -= 1;
                }
                Op::Query { a, b } => assert!(1 <= a && a <= b && b <= len),
            }
        }
    }

    #[test]
    fn replay_small_script() {
        let ops = random_script(1500, 3, 1);
        let mut d = DynamicMode::new(1.0, 0).unwrap();
        let rep = replay(&mut d, &ops, ReplayOptions::default());
        assert!(rep.ok(), "{:?}", rep.violations);
        assert!(rep.queries > 0);
    }

    #[test]
    fn replay_reports_bad_positions() {
        let mut d = DynamicMode::new(1.0, 0).unwrap();
        let rep = replay(&mut d, &[Op::Delete { pos: 1 }], ReplayOptions::default());
        assert_eq!(rep.violation_count, 1);
    }
}
