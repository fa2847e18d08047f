//! Arena of implicit treaps with parent links. One arena holds many trees;
//! a node's 1-based rank is its in-order position within its own tree.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    size: u32,
    prio: u32,
}

#[derive(Clone, Debug)]
pub(crate) struct OrderForest {
    nodes: Vec<Node>,
    free: Vec<u32>,
    rng: ChaCha8Rng,
}

impl OrderForest {
    pub fn new(seed: u64) -> Self {
        Self {
            nodes: Vec::new(),
            free: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A fresh single-node tree.
    pub fn alloc(&mut self) -> u32 {
        let node = Node {
            left: NIL,
            right: NIL,
            parent: NIL,
            size: 1,
            prio: self.rng.random(),
        };
        match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        }
    }

    /// Returns a detached node to the free list.
    pub fn release(&mut self, x: u32) {
        self.free.push(x);
    }

    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn size(&self, t: u32) -> usize {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size as usize
        }
    }

    #[inline]
    fn left(&self, x: u32) -> u32 {
        self.nodes[x as usize].left
    }

    #[inline]
    fn right(&self, x: u32) -> u32 {
        self.nodes[x as usize].right
    }

    fn pull(&mut self, x: u32) {
        let (l, r) = (self.left(x), self.right(x));
        self.nodes[x as usize].size = (1 + self.size(l) + self.size(r)) as u32;
        if l != NIL {
            self.nodes[l as usize].parent = x;
        }
        if r != NIL {
            self.nodes[r as usize].parent = x;
        }
    }

    /// 1-based in-order rank of `x` in its tree.
    pub fn rank(&self, x: u32) -> usize {
        let mut r = self.size(self.left(x)) + 1;
        let mut cur = x;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return r;
            }
            if self.right(p) == cur {
                r += self.size(self.left(p)) + 1;
            }
            cur = p;
        }
    }

    /// Node of rank `k` (1-based) in tree `t`.
    pub fn select(&self, mut t: u32, mut k: usize) -> u32 {
        debug_assert!(k >= 1 && k <= self.size(t));
        loop {
            let ls = self.size(self.left(t));
            if k <= ls {
                t = self.left(t);
            } else if k == ls + 1 {
                return t;
            } else {
                k -= ls + 1;
                t = self.right(t);
            }
        }
    }

    /// Number of leading nodes of `t` satisfying `pred`, which must hold on
    /// a prefix of the in-order sequence.
    pub fn partition_point(&self, mut t: u32, mut pred: impl FnMut(u32) -> bool) -> usize {
        let mut count = 0;
        while t != NIL {
            if pred(t) {
                count += self.size(self.left(t)) + 1;
                t = self.right(t);
            } else {
                t = self.left(t);
            }
        }
        count
    }

    /// Splits `t` into its first `k` nodes and the rest.
    fn split(&mut self, t: u32, k: usize) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let ls = self.size(self.left(t));
        if k <= ls {
            let (a, b) = self.split(self.left(t), k);
            self.nodes[t as usize].left = b;
            self.pull(t);
            (a, t)
        } else {
            let (a, b) = self.split(self.right(t), k - ls - 1);
            self.nodes[t as usize].right = a;
            self.pull(t);
            (t, b)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let r = self.merge(self.right(a), b);
            self.nodes[a as usize].right = r;
            self.pull(a);
            a
        } else {
            let l = self.merge(a, self.left(b));
            self.nodes[b as usize].left = l;
            self.pull(b);
            b
        }
    }

    fn set_root(&mut self, t: u32) -> u32 {
        if t != NIL {
            self.nodes[t as usize].parent = NIL;
        }
        t
    }

    /// Inserts the detached node `x` so that it gets rank `k`; returns the
    /// new root.
    pub fn insert_at(&mut self, root: u32, k: usize, x: u32) -> u32 {
        debug_assert!(k >= 1 && k <= self.size(root) + 1);
        let (a, b) = self.split(root, k - 1);
        let left = self.merge(a, x);
        let t = self.merge(left, b);
        self.set_root(t)
    }

    /// Detaches `x` from its tree (whose root is `root`); returns the new root.
    pub fn remove(&mut self, root: u32, x: u32) -> u32 {
        let c = self.merge(self.left(x), self.right(x));
        let p = self.nodes[x as usize].parent;
        self.nodes[x as usize] = Node {
            left: NIL,
            right: NIL,
            parent: NIL,
            size: 1,
            prio: self.nodes[x as usize].prio,
        };
        if p == NIL {
            return self.set_root(c);
        }
        if self.left(p) == x {
            self.nodes[p as usize].left = c;
        } else {
            self.nodes[p as usize].right = c;
        }
        if c != NIL {
            self.nodes[c as usize].parent = p;
        }
        let mut cur = p;
        while cur != NIL {
            self.nodes[cur as usize].size -= 1;
            cur = self.nodes[cur as usize].parent;
        }
        root
    }

    /// In-order node ids of `t`.
    pub fn in_order(&self, t: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size(t));
        let mut stack = Vec::new();
        let mut cur = t;
        while cur != NIL || !stack.is_empty() {
            while cur != NIL {
                stack.push(cur);
                cur = self.left(cur);
            }
            let x = stack.pop().unwrap();
            out.push(x);
            cur = self.right(x);
        }
        out
    }
}
