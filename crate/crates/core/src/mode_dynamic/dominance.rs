//! Dominance-max store: points `(l, r, j, color)` answering
//! `max { j : a <= l and r <= b }`.
//!
//! Points name their endpoints by element id. Coordinates come from a
//! [`Coords`] lookup at use time, so shifts of the underlying sequence do
//! not require updates: only relative order matters and it never changes for
//! live elements. Each level keeps a treap ordered by `l`, augmented with
//! the point of minimal `r` in every subtree.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::forest::NIL;
use crate::{Color, Error, Result};

/// Current position of an element id.
pub trait Coords {
    fn position(&self, elem: u32) -> usize;
}

/// Element ids are positions.
pub struct Identity;

impl Coords for Identity {
    fn position(&self, elem: u32) -> usize {
        elem as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Point {
    pub level: u32,
    pub start: u32,
    pub end: u32,
    pub color: Color,
}

#[derive(Clone, Copy, Debug)]
struct DNode {
    point: Point,
    left: u32,
    right: u32,
    prio: u32,
    /// Node with the smallest end position in this subtree.
    min_end: u32,
}

#[derive(Clone, Debug)]
pub struct DominanceStore {
    nodes: Vec<DNode>,
    free: Vec<u32>,
    roots: Vec<u32>,
    len: usize,
    rng: ChaCha8Rng,
}

impl Default for DominanceStore {
    fn default() -> Self {
        Self::new(0)
    }
}

impl DominanceStore {
    pub fn new(seed: u64) -> Self {
        Self {
            nodes: Vec::new(),
            free: Vec::new(),
            roots: Vec::new(),
            len: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn end_pos<C: Coords>(&self, c: &C, x: u32) -> usize {
        c.position(self.nodes[x as usize].point.end)
    }

    fn pull<C: Coords>(&mut self, c: &C, x: u32) {
        let DNode { left, right, .. } = self.nodes[x as usize];
        let mut best = x;
        for child in [left, right] {
            if child != NIL {
                let m = self.nodes[child as usize].min_end;
                if self.end_pos(c, m) < self.end_pos(c, best) {
                    best = m;
                }
            }
        }
        self.nodes[x as usize].min_end = best;
    }

    fn start_pos<C: Coords>(&self, c: &C, x: u32) -> usize {
        c.position(self.nodes[x as usize].point.start)
    }

    /// Splits `t` into starts `< key` and `>= key`.
    fn split<C: Coords>(&mut self, c: &C, t: u32, key: usize) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        if self.start_pos(c, t) < key {
            let (a, b) = self.split(c, self.nodes[t as usize].right, key);
            self.nodes[t as usize].right = a;
            self.pull(c, t);
            (t, b)
        } else {
            let (a, b) = self.split(c, self.nodes[t as usize].left, key);
            self.nodes[t as usize].left = b;
            self.pull(c, t);
            (a, t)
        }
    }

    fn merge<C: Coords>(&mut self, c: &C, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let r = self.merge(c, self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = r;
            self.pull(c, a);
            a
        } else {
            let l = self.merge(c, a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = l;
            self.pull(c, b);
            b
        }
    }

    fn root(&self, level: u32) -> u32 {
        self.roots.get(level as usize).copied().unwrap_or(NIL)
    }

    /// Adds a point; its start must be unique within the level.
    pub fn insert<C: Coords>(&mut self, c: &C, p: Point) -> Result<()> {
        let key = c.position(p.start);
        let node = DNode {
            point: p,
            left: NIL,
            right: NIL,
            prio: self.rng.random(),
            min_end: NIL,
        };
        let x = match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        };
        self.nodes[x as usize].min_end = x;
        if self.roots.len() <= p.level as usize {
            self.roots.resize(p.level as usize + 1, NIL);
        }
        let (a, b) = self.split(c, self.root(p.level), key);
        // The leftmost node of `b` is the only possible duplicate.
        let mut first = b;
        while first != NIL && self.nodes[first as usize].left != NIL {
            first = self.nodes[first as usize].left;
        }
        if first != NIL && self.start_pos(c, first) == key {
            let t = self.merge(c, a, b);
            self.roots[p.level as usize] = t;
            self.free.push(x);
            return Err(Error::Logic(format!(
                "level {} already has a point starting at element {}",
                p.level, p.start
            )));
        }
        let left = self.merge(c, a, x);
        let t = self.merge(c, left, b);
        self.roots[p.level as usize] = t;
        self.len += 1;
        Ok(())
    }

    /// Removes a point; fails if no such point is stored.
    pub fn delete<C: Coords>(&mut self, c: &C, p: Point) -> Result<()> {
        let key = c.position(p.start);
        let (t, removed) = self.delete_rec(c, self.root(p.level), key, &p);
        match removed {
            Some(x) => {
                self.roots[p.level as usize] = t;
                self.free.push(x);
                self.len -= 1;
                Ok(())
            }
            None => Err(Error::Logic(format!("deleting absent point {p:?}"))),
        }
    }

    fn delete_rec<C: Coords>(&mut self, c: &C, t: u32, key: usize, p: &Point) -> (u32, Option<u32>) {
        if t == NIL {
            return (NIL, None);
        }
        let sp = self.start_pos(c, t);
        if sp == key {
            if self.nodes[t as usize].point != *p {
                return (t, None);
            }
            let DNode { left, right, .. } = self.nodes[t as usize];
            return (self.merge(c, left, right), Some(t));
        }
        let removed = if key < sp {
            let (l, r) = self.delete_rec(c, self.nodes[t as usize].left, key, p);
            self.nodes[t as usize].left = l;
            r
        } else {
            let (r, x) = self.delete_rec(c, self.nodes[t as usize].right, key, p);
            self.nodes[t as usize].right = r;
            x
        };
        if removed.is_some() {
            self.pull(c, t);
        }
        (t, removed)
    }

    /// Point of `level` with start `>= a` and the smallest end, if that end
    /// is `<= b`.
    pub fn query_level<C: Coords>(&self, c: &C, level: u32, a: usize, b: usize) -> Option<Point> {
        let mut t = self.root(level);
        let mut best: Option<(usize, u32)> = None;
        let mut consider = |x: u32, pos: usize| {
            if best.is_none_or(|(bp, _)| pos < bp) {
                best = Some((pos, x));
            }
        };
        while t != NIL {
            let node = &self.nodes[t as usize];
            if self.start_pos(c, t) >= a {
                consider(t, self.end_pos(c, t));
                if node.right != NIL {
                    let m = self.nodes[node.right as usize].min_end;
                    consider(m, self.end_pos(c, m));
                }
                t = node.left;
            } else {
                t = node.right;
            }
        }
        best.filter(|&(pos, _)| pos <= b)
            .map(|(_, x)| self.nodes[x as usize].point)
    }

    /// The dominated point of highest level.
    pub fn query<C: Coords>(&self, c: &C, a: usize, b: usize) -> Option<Point> {
        (0..self.roots.len() as u32)
            .rev()
            .find_map(|j| self.query_level(c, j, a, b))
    }

    /// All stored points, by level then start.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.len);
        for &root in &self.roots {
            let mut stack = Vec::new();
            let mut cur = root;
            while cur != NIL || !stack.is_empty() {
                while cur != NIL {
                    stack.push(cur);
                    cur = self.nodes[cur as usize].left;
                }
                let x = stack.pop().unwrap();
                out.push(self.nodes[x as usize].point);
                cur = self.nodes[x as usize].right;
            }
        }
        out
    }

    /// Reference answer by scanning every point.
    pub fn query_linear<C: Coords>(&self, c: &C, a: usize, b: usize) -> Option<u32> {
        self.points()
            .iter()
            .filter(|p| c.position(p.start) >= a && c.position(p.end) <= b)
            .map(|p| p.level)
            .max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngExt;

    fn pt(l: u32, r: u32, level: u32, color: Color) -> Point {
        Point {
            level,
            start: l,
            end: r,
            color,
        }
    }

    #[test]
    fn examples() {
        let mut d = DominanceStore::new(1);
        assert_eq!(d.query(&Identity, 1, 10), None);
        d.insert(&Identity, pt(2, 5, 3, 10)).unwrap();
        d.insert(&Identity, pt(1, 9, 7, 20)).unwrap();
        let hit = d.query(&Identity, 2, 6).unwrap();
        assert_eq!((hit.level, hit.color), (3, 10));
        assert_eq!(d.query(&Identity, 1, 9).unwrap().level, 7);
        assert!(d.insert(&Identity, pt(2, 7, 3, 11)).is_err());
        assert!(d.delete(&Identity, pt(2, 6, 3, 10)).is_err());
        assert!(d.delete(&Identity, pt(4, 6, 3, 10)).is_err());
        d.delete(&Identity, pt(2, 5, 3, 10)).unwrap();
        assert_eq!(d.query(&Identity, 2, 6), None);
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut d = DominanceStore::new(2);
        let mut live = Vec::new();
        for _ in 0..100 {
            let level = rng.random_range(0..6);
            let l = rng.random_range(1..200u32);
            let r = l + rng.random_range(0..40u32);
            let p = pt(l, r, level, rng.random_range(1..5));
            if d.insert(&Identity, p).is_ok() {
                live.push(p);
            }
        }
        for round in 0..2 {
            for _ in 0..100 {
                let a = rng.random_range(1..220usize);
                let b = a + rng.random_range(0..80usize);
                let got = d.query(&Identity, a, b).map(|p| p.level);
                assert_eq!(got, d.query_linear(&Identity, a, b));
                let want = live
                    .iter()
                    .filter(|p| p.start as usize >= a && p.end as usize <= b)
                    .map(|p| p.level)
                    .max();
                assert_eq!(got, want);
            }
            if round == 0 {
                for p in live.drain(..50) {
                    d.delete(&Identity, p).unwrap();
                }
            }
        }
        assert_eq!(d.len(), live.len());
    }
}
