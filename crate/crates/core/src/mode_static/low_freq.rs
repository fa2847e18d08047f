use crate::error::{check_epsilon, check_range};
use crate::succinct::wire::Reader;
use crate::succinct::{MonotoneSeq, SpaceBits};
use crate::{ceil_tol, Color, Error, Result};

use super::dense_ids;

/// Result of the low-frequency lookup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowOutcome {
    /// The window mode has `frequency <= kmax`; `position` holds an exact mode.
    Exact { position: usize, frequency: usize },
    HighFrequency,
}

/// Tables `Q_k[i]` = largest `j >= i-1` with `F(c[i..=j]) <= k`, for
/// `k = 1..=kmax`. Tables with `k >= n` would be constant `n` and are not
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowFreqIndex {
    n: usize,
    kmax: usize,
    tables: Vec<MonotoneSeq>,
}

impl LowFreqIndex {
    pub fn build(seq: &[Color], epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if seq.is_empty() {
            return Err(Error::InvalidParameter("empty sequence".into()));
        }
        let n = seq.len();
        let kmax = ceil_tol(1.0 / epsilon) as usize;
        let (ids, sigma) = dense_ids(seq);
        let stored = kmax.min(n.saturating_sub(1));
        let mut tables = Vec::with_capacity(stored);
        let mut count = vec![0usize; sigma];
        let mut q = vec![0usize; n];
        for k in 1..=stored {
            // Window [i, j] in 0-based terms, with j == i-1 when empty.
            let mut j = 0usize;
            for i in 0..n {
                while j < n && count[ids[j] as usize] < k {
                    count[ids[j] as usize] += 1;
                    j += 1;
                }
                q[i] = j;
                // The window always holds c[i] itself, since k >= 1.
                count[ids[i] as usize] -= 1;
            }
            tables.push(MonotoneSeq::encode(&q, n)?);
        }
        Ok(Self { n, kmax, tables })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn tables(&self) -> &[MonotoneSeq] {
        &self.tables
    }

    /// `Q_k[i]`, with `Q_0[i] = i-1`.
    pub fn q(&self, k: usize, i: usize) -> usize {
        match k {
            0 => i - 1,
            k if k > self.tables.len() => self.n,
            k => self.tables[k - 1].get(i),
        }
    }

    /// Binary search for the window frequency when it is at most `kmax`.
    /// Returns the outcome and the number of table probes.
    pub fn query(&self, a: usize, b: usize) -> Result<(LowOutcome, u32)> {
        check_range(a, b, self.n)?;
        let mut probes = 1;
        if b > self.q(self.kmax, a) {
            return Ok((LowOutcome::HighFrequency, probes));
        }
        // Smallest K in [1, kmax] with b <= Q_K[a].
        let (mut lo, mut hi) = (1, self.kmax);
        let mut last_below = (0, a - 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            probes += 1;
            let q = self.q(mid, a);
            if b <= q {
                hi = mid;
            } else {
                lo = mid + 1;
                last_below = (mid, q);
            }
        }
        let prev = if last_below.0 == lo - 1 {
            last_below.1
        } else {
            probes += 1;
            self.q(lo - 1, a)
        };
        Ok((
            LowOutcome::Exact {
                position: prev + 1,
                frequency: lo,
            },
            probes,
        ))
    }

    pub fn space(&self) -> SpaceBits {
        self.tables.iter().map(|t| t.space()).sum()
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.kmax as u64).to_le_bytes());
        out.extend_from_slice(&(self.tables.len() as u32).to_le_bytes());
        for t in &self.tables {
            t.write_to(out);
        }
    }

    pub(crate) fn read_from(r: &mut Reader<'_>, n: usize) -> Result<Self> {
        let kmax = r.u64()? as usize;
        let count = r.u32()? as usize;
        if count > kmax.min(n) {
            return Err(Error::Format(format!("{count} low-frequency tables for kmax {kmax}")));
        }
        let mut tables = Vec::with_capacity(count);
        for _ in 0..count {
            let t = MonotoneSeq::read_from(r)?;
            if t.len() != n {
                return Err(Error::Format("low-frequency table length mismatch".into()));
            }
            tables.push(t);
        }
        Ok(Self { n, kmax, tables })
    }
}
