//! Dynamic approximate range mode under insertions and deletions.

mod checker;
mod dominance;
mod dynamic;
mod forest;
mod layout;
mod params;
mod script;

pub use dominance::{Coords, DominanceStore, Identity, Point};
pub use dynamic::{DynAnswer, DynStats, DynamicMode};
pub use params::{DynParams, LevelSpec};
pub use script::{
    format_script, parse_script, random_script, replay, Op, QueryCheck, ReplayOptions, ReplayReport,
};
