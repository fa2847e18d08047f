//! Space-efficient encodings for approximate range queries.
//!
//! - [`mode_static`]: a static `(1+ε)`-approximate range mode encoding that
//!   answers queries without access to the input sequence.
//! - [`mode_dynamic`]: a dynamic `(1+ε)`-approximate range mode structure
//!   supporting insertions and deletions.
//! - [`selection`]: `α`-approximate range selection encodings, either for a
//!   rank function fixed at build time or for a rank given per query.
//!
//! Positions and ranks are 1-based and query ranges `[a, b]` are inclusive.
//! [`oracle`] holds the brute-force ground truth and [`generators`] the test
//! corpora, including the lower-bound families.

pub mod error;
pub mod generators;
pub mod harness;
pub mod mode_dynamic;
pub mod mode_static;
pub mod oracle;
pub mod selection;
pub mod succinct;

pub use error::{Error, Result};

/// An element value. Mode queries only compare colors for equality;
/// selection queries order them numerically.
pub type Color = u64;

/// Index of the recursion node whose midpoint splits `[a, b]` (1-based,
/// `a < b`), as `(height, t)`: the node spans `2^(height+1)` positions and
/// its left half ends at position `t`.
#[inline]
pub(crate) fn crossing_node(a: usize, b: usize) -> (u32, usize) {
    debug_assert!(a < b);
    let (a0, b0) = (a - 1, b - 1);
    let height = usize::BITS - 1 - (a0 ^ b0).leading_zeros();
    let base = (a0 >> (height + 1)) << (height + 1);
    (height, base + (1usize << height))
}

/// `⌈x⌉`, tolerant to floating error just above an integer.
#[inline]
pub(crate) fn ceil_tol(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// `⌊x⌋`, tolerant to floating error just below an integer.
#[inline]
pub(crate) fn floor_tol(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}
