use super::wire::Reader;
use crate::{Error, Result};

/// Fixed-width unsigned integers packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedInts {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl PackedInts {
    pub fn new(width: u32) -> Self {
        assert!(width <= 64);
        Self {
            width,
            len: 0,
            words: Vec::new(),
        }
    }

    pub fn with_capacity(width: u32, len: usize) -> Self {
        let mut p = Self::new(width);
        p.words.reserve((len * width as usize).div_ceil(64));
        p
    }

    /// A zero-filled array of `len` entries.
    pub fn zeros(width: u32, len: usize) -> Self {
        assert!(width <= 64);
        Self {
            width,
            len,
            words: vec![0; (len * width as usize).div_ceil(64)],
        }
    }

    /// Smallest width able to hold `max`.
    pub fn width_for(max: u64) -> u32 {
        64 - max.leading_zeros()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> usize {
        self.len * self.width as usize
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    pub fn push(&mut self, v: u64) {
        let i = self.len;
        self.len += 1;
        let need = (self.len * self.width as usize).div_ceil(64);
        self.words.resize(need, 0);
        self.set(i, v);
    }

    pub fn set(&mut self, i: usize, v: u64) {
        assert!(i < self.len);
        assert!(v & !self.mask() == 0, "value {v} exceeds width {}", self.width);
        if self.width == 0 {
            return;
        }
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mask = self.mask();
        self.words[w] = (self.words[w] & !(mask << off)) | (v << off);
        if off + self.width as usize > 64 {
            let spill = 64 - off;
            self.words[w + 1] = (self.words[w + 1] & !(mask >> spill)) | (v >> spill);
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mut v = self.words[w] >> off;
        if off + self.width as usize > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        v & self.mask()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        out.push(self.width as u8);
        out.extend_from_slice(&(self.len as u64).to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }

    pub(crate) fn read_from(r: &mut Reader<'_>) -> Result<Self> {
        let width = r.u8()? as u32;
        if width > 64 {
            return Err(Error::Format(format!("packed width {width} > 64")));
        }
        let len = r.u64()? as usize;
        let nwords = len
            .checked_mul(width as usize)
            .ok_or_else(|| Error::Format("packed array too large".into()))?
            .div_ceil(64);
        let mut words = Vec::with_capacity(nwords.min(1 << 20));
        for _ in 0..nwords {
            words.push(r.u64()?);
        }
        Ok(Self { width, len, words })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn roundtrip(width in 0u32..=64, raw in proptest::collection::vec(any::<u64>(), 0..200)) {
            let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
            let vals: Vec<u64> = raw.iter().map(|v| v & mask).collect();
            let mut p = PackedInts::new(width);
            for &v in &vals { p.push(v); }
            prop_assert_eq!(p.iter().collect::<Vec<_>>(), vals.clone());
            let mut buf = Vec::new();
            p.write_to(&mut buf);
            let q = PackedInts::read_from(&mut Reader::new(&buf)).unwrap();
            prop_assert_eq!(q, p);
        }
    }

    #[test]
    fn width_for_values() {
        assert_eq!(PackedInts::width_for(0), 0);
        assert_eq!(PackedInts::width_for(1), 1);
        assert_eq!(PackedInts::width_for(8), 4);
        assert_eq!(PackedInts::width_for(u64::MAX), 64);
    }
}
