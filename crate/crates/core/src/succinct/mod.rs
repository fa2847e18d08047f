//! Succinct building blocks: a rank/select bit vector and the two sequence
//! codecs stored on top of it.

mod bitvec;
mod marks;
mod monotone;
mod packed;
pub(crate) mod wire;

pub use bitvec::{BitBuf, RankSelectBitVector};
pub use marks::MarkedSeq;
pub use monotone::MonotoneSeq;
pub use packed::PackedInts;

/// Bits of a succinct component, split into encoded data and navigation
/// directory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SpaceBits {
    pub payload: usize,
    pub directory: usize,
}

impl SpaceBits {
    pub fn total(&self) -> usize {
        self.payload + self.directory
    }
}

impl std::ops::Add for SpaceBits {
    type Output = SpaceBits;
    fn add(self, o: SpaceBits) -> SpaceBits {
        SpaceBits {
            payload: self.payload + o.payload,
            directory: self.directory + o.directory,
        }
    }
}

impl std::ops::AddAssign for SpaceBits {
    fn add_assign(&mut self, o: SpaceBits) {
        *self = *self + o;
    }
}

impl std::iter::Sum for SpaceBits {
    fn sum<I: Iterator<Item = SpaceBits>>(iter: I) -> SpaceBits {
        iter.fold(SpaceBits::default(), |a, b| a + b)
    }
}
