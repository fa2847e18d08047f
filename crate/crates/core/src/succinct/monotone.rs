use super::wire::Reader;
use super::{BitBuf, RankSelectBitVector, SpaceBits};
use crate::{Error, Result};

/// Non-decreasing sequence `Q[1..n]` with values at most `bound`, stored as
/// unary gaps: `Q[i] - Q[i-1]` ones followed by a zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneSeq {
    bits: RankSelectBitVector,
}

impl MonotoneSeq {
    pub fn encode(values: &[usize], bound: usize) -> Result<Self> {
        let mut buf = BitBuf::with_capacity(values.len() + values.last().copied().unwrap_or(0));
        let mut prev = 0;
        for (i, &v) in values.iter().enumerate() {
            if v < prev {
                return Err(Error::InvalidParameter(format!(
                    "sequence decreases at index {}: {} < {}",
                    i + 1,
                    v,
                    prev
                )));
            }
            if v > bound {
                return Err(Error::InvalidParameter(format!(
                    "value {v} at index {} exceeds bound {bound}",
                    i + 1
                )));
            }
            buf.push_run(true, v - prev);
            buf.push(false);
            prev = v;
        }
        Ok(Self {
            bits: buf.into_rank_select(),
        })
    }

    pub fn len(&self) -> usize {
        self.bits.count_zeros()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Q[i]` for `1 <= i <= n`.
    pub fn access(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfBounds {
                index: i,
                len: self.len(),
            });
        }
        Ok(self.get(i))
    }

    /// Unchecked form of [`access`](Self::access) for hot query paths.
    #[inline]
    pub(crate) fn get(&self, i: usize) -> usize {
        self.bits.select0(i).expect("index checked by caller") - i
    }

    pub fn bits(&self) -> &RankSelectBitVector {
        &self.bits
    }

    pub fn space(&self) -> SpaceBits {
        SpaceBits {
            payload: self.bits.len(),
            directory: self.bits.directory_bits(),
        }
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        self.bits.write_to(out);
    }

    pub(crate) fn read_from(r: &mut Reader<'_>) -> Result<Self> {
        let bits = RankSelectBitVector::read_from(r)?;
        Ok(Self { bits })
    }
}
