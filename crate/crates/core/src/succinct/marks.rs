use super::wire::Reader;
use super::{BitBuf, PackedInts, RankSelectBitVector, SpaceBits};
use crate::{Error, Result};

/// Sorted marks in `[1, n+1]`, where `n+1` means "never reached".
///
/// Each in-range mark `r` is split into a high part `r >> w` and a low part
/// of `w` bits. High parts use the unary layout: `n >> w` zeros with a one
/// inserted after the `h`-th zero for every mark with high part `h`. With
/// `w = 0` this is exactly "n zeros, a one after the r-th zero". The default
/// `w = floor(lg(n / m))` keeps the cost near `m * (2 + lg(n/m))` bits.
/// Sentinel marks are kept only as a count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSeq {
    n: usize,
    low_width: u32,
    high: RankSelectBitVector,
    low: PackedInts,
    sentinels: usize,
}

impl MarkedSeq {
    pub fn encode(marks: &[usize], n: usize) -> Result<Self> {
        let stored = marks.iter().take_while(|&&m| m <= n).count();
        let w = if stored == 0 {
            PackedInts::width_for(n as u64)
        } else if n >= stored {
            (n / stored).ilog2()
        } else {
            0
        };
        Self::with_low_width(marks, n, w)
    }

    pub fn with_low_width(marks: &[usize], n: usize, low_width: u32) -> Result<Self> {
        if low_width >= usize::BITS {
            return Err(Error::InvalidParameter(format!("low width {low_width}")));
        }
        let mut prev = 1;
        for (i, &m) in marks.iter().enumerate() {
            if m < prev || m > n + 1 {
                return Err(Error::InvalidParameter(format!(
                    "mark {} at index {} is unsorted or outside [1, {}]",
                    m,
                    i + 1,
                    n + 1
                )));
            }
            prev = m;
        }
        let stored = marks.partition_point(|&m| m <= n);
        let zeros = n >> low_width;
        let lo_mask = (1usize << low_width) - 1;

        let mut high = BitBuf::with_capacity(zeros + stored);
        let mut low = PackedInts::with_capacity(low_width, stored);
        let mut it = marks[..stored].iter().peekable();
        for h in 0..=zeros {
            if h > 0 {
                high.push(false);
            }
            while let Some(&&m) = it.peek() {
                if m >> low_width != h {
                    break;
                }
                high.push(true);
                low.push((m & lo_mask) as u64);
                it.next();
            }
        }
        Ok(Self {
            n,
            low_width,
            high: high.into_rank_select(),
            low,
            sentinels: marks.len() - stored,
        })
    }

    pub fn len(&self) -> usize {
        self.low.len() + self.sentinels
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn sentinel_count(&self) -> usize {
        self.sentinels
    }

    pub fn low_width(&self) -> u32 {
        self.low_width
    }

    pub fn high_bits(&self) -> &RankSelectBitVector {
        &self.high
    }

    /// The `i`-th mark (1-based); sentinels read as `n+1`.
    pub fn get(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfBounds {
                index: i,
                len: self.len(),
            });
        }
        Ok(self.get_unchecked(i))
    }

    #[inline]
    pub(crate) fn get_unchecked(&self, i: usize) -> usize {
        if i > self.low.len() {
            return self.n + 1;
        }
        let h = self.high.select1(i).expect("index checked by caller") - i;
        (h << self.low_width) | self.low.get(i - 1) as usize
    }

    /// Number of marks `<= b`.
    pub fn pred_rank(&self, b: usize) -> usize {
        let stored = self.low.len();
        if b > self.n {
            return stored + self.sentinels;
        }
        if b == self.n {
            return stored;
        }
        let hb = b >> self.low_width;
        let lt = if hb == 0 { 0 } else { self.count_high_le(hb - 1) };
        let le = self.count_high_le(hb);
        let lb = (b & ((1usize << self.low_width) - 1)) as u64;
        let (mut lo, mut hi) = (lt, le);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.low.get(mid) <= lb {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn count_high_le(&self, h: usize) -> usize {
        match self.high.select0(h + 1) {
            Some(p) => p - (h + 1),
            None => self.low.len(),
        }
    }

    pub fn space(&self) -> SpaceBits {
        SpaceBits {
            payload: self.high.len() + self.low.bits() + 64,
            directory: self.high.directory_bits(),
        }
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&(self.sentinels as u64).to_le_bytes());
        out.push(self.low_width as u8);
        self.high.write_to(out);
        self.low.write_to(out);
    }

    pub(crate) fn read_from(r: &mut Reader<'_>) -> Result<Self> {
        let n = r.u64()? as usize;
        let sentinels = r.u64()? as usize;
        let low_width = r.u8()? as u32;
        let high = RankSelectBitVector::read_from(r)?;
        let low = PackedInts::read_from(r)?;
        if low_width >= usize::BITS
            || low.width() != low_width
            || low.len() != high.count_ones()
            || high.count_zeros() != n >> low_width
        {
            return Err(Error::Format("inconsistent marked sequence".into()));
        }
        Ok(Self {
            n,
            low_width,
            high,
            low,
            sentinels,
        })
    }
}
