use crate::succinct::wire::Reader;
use crate::succinct::{MarkedSeq, SpaceBits};
use crate::{ceil_tol, Error, Result};

/// Block widths and thresholds of level `k`, derived from `(ε, k)` alone.
///
/// With `Δ = sqrt(1+ε) - 1` and `f_j = (Δ/ε)(1+Δ)^j`:
/// `w = ⌈f_{2k-1}⌉`, `w' = ⌈f_{2k}⌉`, `T = ⌈(1+ε)^k/ε⌉`,
/// `T' = ⌈(1+Δ)^{2k+1}/ε⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelParams {
    pub k: u32,
    pub w: usize,
    pub w_prime: usize,
    pub t: usize,
    pub t_prime: usize,
}

/// `(1+ε)^k / ε`, the real-valued band boundary of level `k`.
pub fn band(epsilon: f64, k: u32) -> f64 {
    (1.0 + epsilon).powi(k as i32) / epsilon
}

fn ceil_usize(x: f64) -> usize {
    if x >= usize::MAX as f64 {
        usize::MAX
    } else {
        ceil_tol(x).max(1) as usize
    }
}

impl LevelParams {
    pub fn new(epsilon: f64, k: u32) -> Self {
        let delta = (1.0 + epsilon).sqrt() - 1.0;
        let f = |j: i32| delta / epsilon * (1.0 + delta).powi(j);
        let k2 = 2 * k as i32;
        Self {
            k,
            w: ceil_usize(f(k2 - 1)),
            w_prime: ceil_usize(f(k2)),
            t: ceil_usize(band(epsilon, k)),
            t_prime: ceil_usize((1.0 + delta).powi(k2 + 1) / epsilon),
        }
    }
}

/// Verdict of one level for a window, comparing its mode frequency `F`
/// with `(1+ε)^k/ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trichotomy {
    /// `F < (1+ε)^k/ε`.
    Below,
    /// The element at `witness` occurs more than `(1+ε)^k/ε` times.
    Above { witness: usize },
    /// `(1+ε)^(k-1/2)/ε < F < (1+ε)^(k+1/2)/ε`, and the element at `witness`
    /// occurs more than `(1+ε)^(k-1/2)/ε` times.
    Within { witness: usize },
}

/// Marks `r_i` (threshold `T` from block starts `i·w + 1`) and `r'_i`
/// (threshold `T'` from `i·w' + 1`) of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    params: LevelParams,
    r: MarkedSeq,
    r_prime: MarkedSeq,
}

impl Level {
    /// `ids` are dense color ids; `count` is zeroed scratch of alphabet size
    /// and is zeroed again on return.
    pub(crate) fn build(ids: &[u32], params: LevelParams, count: &mut [usize]) -> Result<Self> {
        let n = ids.len();
        let r = MarkedSeq::encode(&threshold_marks(ids, params.w, params.t, count), n)?;
        let r_prime =
            MarkedSeq::encode(&threshold_marks(ids, params.w_prime, params.t_prime, count), n)?;
        Ok(Self { params, r, r_prime })
    }

    pub fn params(&self) -> &LevelParams {
        &self.params
    }

    pub fn marks(&self) -> &MarkedSeq {
        &self.r
    }

    pub fn marks_prime(&self) -> &MarkedSeq {
        &self.r_prime
    }

    /// Classifies `[a, b]` (validated by the caller). Also returns the
    /// number of mark lookups.
    pub fn classify(&self, a: usize, b: usize) -> (Trichotomy, u32) {
        let i = (a - 1) / self.params.w;
        let r_i = self.r.get_unchecked(i + 1);
        if b < r_i {
            return (Trichotomy::Below, 1);
        }
        let j = (a - 1) / self.params.w_prime;
        let rp = self.r_prime.get_unchecked(j + 1);
        if b >= rp {
            (Trichotomy::Above { witness: rp }, 2)
        } else {
            (Trichotomy::Within { witness: r_i }, 2)
        }
    }

    pub fn space(&self) -> SpaceBits {
        self.r.space() + self.r_prime.space()
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        self.r.write_to(out);
        self.r_prime.write_to(out);
    }

    pub(crate) fn read_from(r: &mut Reader<'_>, n: usize, params: LevelParams) -> Result<Self> {
        let marks = MarkedSeq::read_from(r)?;
        let marks_prime = MarkedSeq::read_from(r)?;
        if marks.universe() != n
            || marks_prime.universe() != n
            || marks.len() != n.div_ceil(params.w)
            || marks_prime.len() != n.div_ceil(params.w_prime)
        {
            return Err(Error::Format(format!("level {} does not match n", params.k)));
        }
        Ok(Self {
            params,
            r: marks,
            r_prime: marks_prime,
        })
    }
}

/// For each block start `s = i·w + 1`, the smallest `r` with
/// `F(c[s..=r]) >= t`, or `n + 1`.
pub(crate) fn threshold_marks(ids: &[u32], w: usize, t: usize, count: &mut [usize]) -> Vec<usize> {
    let n = ids.len();
    let blocks = n.div_ceil(w);
    let mut marks = Vec::with_capacity(blocks);
    // Window is ids[s..r]; `full` counts colors reaching the threshold.
    let (mut s, mut r, mut full) = (0usize, 0usize, 0usize);
    for i in 0..blocks {
        let start = i * w;
        while s < start {
            if s < r {
                let c = &mut count[ids[s] as usize];
                if *c == t {
                    full -= 1;
                }
                *c -= 1;
            }
            s += 1;
        }
        r = r.max(s);
        while full == 0 && r < n {
            let c = &mut count[ids[r] as usize];
            *c += 1;
            if *c == t {
                full += 1;
            }
            r += 1;
        }
        if full == 0 {
            marks.resize(blocks, n + 1);
            break;
        }
        marks.push(r);
    }
    for &c in &ids[s.min(r)..r] {
        count[c as usize] = 0;
    }
    marks
}
