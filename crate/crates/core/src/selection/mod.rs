//! `α`-approximate range selection encodings.
//!
//! An answer for rank `k` in a window of size `s` is any position whose
//! value's rank interval in the window meets `[k - αs, k + αs]`.
//! [`FixedRankSelector`] serves one rank function chosen at build time;
//! [`OnlineRankSelector`] takes the rank with each query.
//!
//! Both recurse on the dyadic midpoint network and sample windows that end
//! at geometrically spaced offsets around each midpoint.

mod fixed;
mod grid;
mod online;
mod rank_fn;

pub use fixed::FixedRankSelector;
pub use online::OnlineRankSelector;
pub use rank_fn::RankFunction;
