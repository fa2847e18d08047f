//! Plain bit vector with a two-level rank directory and sampled select.
//!
//! Layout:
//! - superblocks of 256 bits, each with a 32-bit absolute one-count;
//! - one 8-bit count per 64-bit word, relative to its superblock;
//! - one 32-bit superblock hint per 512 ones and per 512 zeros for select.
//!
//! For vectors of at least 2^16 bits the directory stays below 32% of the
//! payload.

use std::fmt;

const WORD_BITS: usize = 64;
const SUPERBLOCK_BITS: usize = 256;
const WORDS_PER_SUPERBLOCK: usize = SUPERBLOCK_BITS / WORD_BITS;
const SELECT_SAMPLE: usize = 512;

/// Growable packed bit buffer used to assemble encodings bit by bit.
#[derive(Clone, Default)]
pub struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(WORD_BITS)),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % WORD_BITS == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / WORD_BITS] |= 1 << (self.len % WORD_BITS);
        }
        self.len += 1;
    }

    pub fn push_run(&mut self, bit: bool, count: usize) {
        // TODO: write whole words for long runs; the encodings here only
        // push short unary codes, so bit-at-a-time has not shown up in builds.
        for _ in 0..count {
            self.push(bit);
        }
    }

    pub fn into_rank_select(self) -> RankSelectBitVector {
        RankSelectBitVector::from_words(self.words, self.len)
    }
}

impl FromIterator<bool> for BitBuf {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut buf = BitBuf::new();
        for b in iter {
            buf.push(b);
        }
        buf
    }
}

/// Immutable bit vector supporting `rank0/rank1` and `select0/select1`.
///
/// `rank1(i)` counts ones among the first `i` bits; `select1(j)` returns the
/// 1-based position of the `j`-th one, so `rank1(select1(j)) == j`.
#[derive(Clone, PartialEq, Eq)]
pub struct RankSelectBitVector {
    len: usize,
    ones: usize,
    words: Vec<u64>,
    superblocks: Vec<u32>,
    blocks: Vec<u8>,
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl fmt::Debug for RankSelectBitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: String = (0..self.len.min(128))
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        f.debug_struct("RankSelectBitVector")
            .field("len", &self.len)
            .field("ones", &self.ones)
            .field("bits", &shown)
            .finish()
    }
}

impl RankSelectBitVector {
    /// Builds from packed little-endian words; bits at or beyond `len` are
    /// cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(WORD_BITS), 0);
        if len % WORD_BITS != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD_BITS)) - 1;
        }

        let mut superblocks = Vec::with_capacity(len.div_ceil(SUPERBLOCK_BITS));
        let mut blocks = Vec::with_capacity(words.len());
        let mut select1_hints = Vec::new();
        let mut select0_hints = Vec::new();

        let mut ones = 0usize;
        let mut sb_start = 0usize;
        for (w, &word) in words.iter().enumerate() {
            if w % WORDS_PER_SUPERBLOCK == 0 {
                superblocks.push(ones as u32);
                sb_start = ones;
            }
            blocks.push((ones - sb_start) as u8);

            let sb = (w / WORDS_PER_SUPERBLOCK) as u32;
            let valid = (len - w * WORD_BITS).min(WORD_BITS);
            let word_ones = word.count_ones() as usize;
            let zeros_before = w * WORD_BITS - ones;
            let word_zeros = valid - word_ones;
            // Record the superblock holding the (s*SAMPLE + 1)-th one/zero.
            while select1_hints.len() * SELECT_SAMPLE < ones + word_ones {
                select1_hints.push(sb);
            }
            while select0_hints.len() * SELECT_SAMPLE < zeros_before + word_zeros {
                select0_hints.push(sb);
            }
            ones += word_ones;
        }

        Self {
            len,
            ones,
            words,
            superblocks,
            blocks,
            select1_hints,
            select0_hints,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        bits.into_iter().collect::<BitBuf>().into_rank_select()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    /// Number of ones in `[0, i)`, for `0 <= i <= len`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        assert!(i <= self.len, "rank position {i} beyond length {}", self.len);
        if i == self.len {
            return self.ones;
        }
        let w = i / WORD_BITS;
        let base = self.superblocks[w / WORDS_PER_SUPERBLOCK] as usize + self.blocks[w] as usize;
        let mask = (1u64 << (i % WORD_BITS)) - 1;
        base + (self.words[w] & mask).count_ones() as usize
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// 1-based position of the `j`-th one.
    pub fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.ones {
            return None;
        }
        let sb = self.find_superblock(j, &self.select1_hints, |sb| {
            self.superblocks[sb] as usize
        });
        let mut remaining = j - self.superblocks[sb] as usize;
        let first = sb * WORDS_PER_SUPERBLOCK;
        let last = (first + WORDS_PER_SUPERBLOCK).min(self.words.len());
        for w in first..last {
            let c = self.words[w].count_ones() as usize;
            if remaining <= c {
                return Some(w * WORD_BITS + select_in_word(self.words[w], remaining) + 1);
            }
            remaining -= c;
        }
        unreachable!("rank directory inconsistent with payload")
    }

    /// 1-based position of the `j`-th zero.
    pub fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_zeros() {
            return None;
        }
        let zeros_before_sb =
            |sb: usize| sb * SUPERBLOCK_BITS - self.superblocks[sb] as usize;
        let sb = self.find_superblock(j, &self.select0_hints, zeros_before_sb);
        let mut remaining = j - zeros_before_sb(sb);
        let first = sb * WORDS_PER_SUPERBLOCK;
        let last = (first + WORDS_PER_SUPERBLOCK).min(self.words.len());
        for w in first..last {
            // Padding past `len` reads as zeros, but the j-th real zero is
            // always found before it.
            let inv = !self.words[w];
            let c = inv.count_ones() as usize;
            if remaining <= c {
                return Some(w * WORD_BITS + select_in_word(inv, remaining) + 1);
            }
            remaining -= c;
        }
        unreachable!("rank directory inconsistent with payload")
    }

    /// Last superblock whose preceding count is `< j`, searched between the
    /// sampled hints around `j`.
    fn find_superblock(&self, j: usize, hints: &[u32], before: impl Fn(usize) -> usize) -> usize {
        let s = (j - 1) / SELECT_SAMPLE;
        let mut lo = hints[s] as usize;
        let mut hi = match hints.get(s + 1) {
            Some(&h) => h as usize,
            None => self.superblocks.len() - 1,
        };
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if before(mid) < j {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    /// Bits spent on the rank/select directory.
    pub fn directory_bits(&self) -> usize {
        self.superblocks.len() * 32
            + self.blocks.len() * 8
            + (self.select1_hints.len() + self.select0_hints.len()) * 32
    }

    pub(crate) fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.len as u64).to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }

    pub(crate) fn read_from(r: &mut super::wire::Reader<'_>) -> crate::Result<Self> {
        let len = r.u64()? as usize;
        let nwords = len.div_ceil(WORD_BITS);
        let mut words = Vec::with_capacity(nwords);
        for _ in 0..nwords {
            words.push(r.u64()?);
        }
        Ok(Self::from_words(words, len))
    }
}

/// Position of the `r`-th set bit of `word` (1-based `r`).
#[inline]
fn select_in_word(mut word: u64, r: usize) -> usize {
    for _ in 1..r {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> RankSelectBitVector {
        RankSelectBitVector::from_bits(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn small_vectors() {
        let bv = parse("1011");
        assert_eq!(bv.rank1(4), 3);
        assert_eq!(bv.rank0(4), 1);

        let bv = parse("0000");
        assert_eq!(bv.select1(1), None);
        assert_eq!(bv.select0(4), Some(4));

        let bv = parse("110010110");
        assert_eq!(bv.select0(2), Some(4));
        assert_eq!(bv.rank1(4), 2);
    }

    #[test]
    fn empty_vector() {
        let bv = RankSelectBitVector::from_bits(std::iter::empty());
        assert_eq!(bv.rank1(0), 0);
        assert_eq!(bv.select0(1), None);
        assert_eq!(bv.directory_bits(), 0);
    }

    #[test]
    fn directory_overhead_is_sublinear() {
        for density in [1, 2, 7, 64] {
            let n = 1 << 16;
            let bv = RankSelectBitVector::from_bits((0..n).map(|i| i % density == 0));
            assert!(bv.directory_bits() * 2 <= n, "density {density}");
        }
    }

    #[test]
    fn long_runs_cross_sample_boundaries() {
        let n = 10_000;
        let bv = RankSelectBitVector::from_bits((0..n).map(|i| (i / 700) % 2 == 0));
        let mut ones = 0;
        let mut zeros = 0;
        for i in 0..n {
            if bv.get(i) {
                ones += 1;
                assert_eq!(bv.select1(ones), Some(i + 1));
            } else {
                zeros += 1;
                assert_eq!(bv.select0(zeros), Some(i + 1));
            }
        }
    }

    proptest! {
        #[test]
        fn rank_select_inverse(bits in proptest::collection::vec(any::<bool>(), 0..3000)) {
            let bv = RankSelectBitVector::from_bits(bits.iter().copied());
            let mut ones = 0;
            for i in 0..=bits.len() {
                prop_assert_eq!(bv.rank1(i), ones);
                prop_assert_eq!(bv.rank0(i) + bv.rank1(i), i);
                if ones >= 1 {
                    let p = bv.select1(ones).unwrap();
                    prop_assert!(p <= i);
                    prop_assert_eq!(bv.rank1(p), ones);
                }
                let zeros = i - ones;
                if zeros >= 1 {
                    prop_assert!(bv.select0(zeros).unwrap() <= i);
                }
                if i < bits.len() && bits[i] { ones += 1; }
            }
            prop_assert_eq!(bv.select1(ones + 1), None);
        }
    }
}
