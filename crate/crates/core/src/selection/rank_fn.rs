use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Rank as a function of window size, with `1 <= f(s) <= s` and
/// `f(s) <= f(s+1) <= f(s) + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankFunction {
    /// `⌈s/2⌉`
    Median,
    Min,
    Max,
    /// `min(k, s)`
    Const(usize),
}

impl RankFunction {
    #[inline]
    pub fn eval(&self, s: usize) -> usize {
        match *self {
            RankFunction::Median => s.div_ceil(2),
            RankFunction::Min => 1,
            RankFunction::Max => s,
            RankFunction::Const(k) => k.min(s),
        }
    }

    pub(crate) fn id(&self) -> (u8, u64) {
        match *self {
            RankFunction::Median => (0, 0),
            RankFunction::Min => (1, 0),
            RankFunction::Max => (2, 0),
            RankFunction::Const(k) => (3, k as u64),
        }
    }

    pub(crate) fn from_id(tag: u8, k: u64) -> Result<Self> {
        match (tag, k) {
            (0, _) => Ok(RankFunction::Median),
            (1, _) => Ok(RankFunction::Min),
            (2, _) => Ok(RankFunction::Max),
            (3, k) if k >= 1 => Ok(RankFunction::Const(k as usize)),
            _ => Err(Error::InvalidParameter(format!("unknown rank function {tag}:{k}"))),
        }
    }
}

impl FromStr for RankFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median" => Ok(RankFunction::Median),
            "min" => Ok(RankFunction::Min),
            "max" => Ok(RankFunction::Max),
            _ => match s.strip_prefix("const:").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => Ok(RankFunction::Const(k)),
                _ => Err(Error::InvalidParameter(format!(
                    "rank function must be median, min, max or const:<k>, got {s:?}"
                ))),
            },
        }
    }
}

impl fmt::Display for RankFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankFunction::Median => write!(f, "median"),
            RankFunction::Min => write!(f, "min"),
            RankFunction::Max => write!(f, "max"),
            RankFunction::Const(k) => write!(f, "const:{k}"),
        }
    }
}
