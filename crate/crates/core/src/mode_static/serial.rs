//! `ARMQ` container for [`StaticModeIndex`]. The byte layout is described in
//! `docs/FORMAT.md`.

use crate::error::check_epsilon;
use crate::succinct::wire::Reader;
use crate::{Error, Result};

use super::index::level_plan;
use super::{Level, LowFreqIndex, QuadApproxIndex, StaticModeIndex};

pub const MAGIC: &[u8; 4] = b"ARMQ";
pub const VERSION: u16 = 1;

const SECTION_LOW: u32 = 1;
const SECTION_LEVELS: u32 = 2;
const SECTION_QUAD: u32 = 3;
const HEADER_BYTES: usize = 4 + 2 + 2 + 8 + 8 + 4;
const ENTRY_BYTES: usize = 4 + 8 + 8;

impl StaticModeIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut low = Vec::new();
        self.low().write_to(&mut low);
        let mut levels = Vec::new();
        levels.extend_from_slice(&(self.levels().len() as u32).to_le_bytes());
        for lv in self.levels() {
            lv.write_to(&mut levels);
        }
        let mut quad = Vec::new();
        self.quad().write_to(&mut quad);
        let sections = [(SECTION_LOW, low), (SECTION_LEVELS, levels), (SECTION_QUAD, quad)];

        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&0u16.to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.epsilon().to_bits().to_le_bytes());
        out.extend_from_slice(&(sections.len() as u32).to_le_bytes());
        let mut offset = HEADER_BYTES + sections.len() * ENTRY_BYTES;
        for (id, body) in &sections {
            out.extend_from_slice(&id.to_le_bytes());
            out.extend_from_slice(&(offset as u64).to_le_bytes());
            out.extend_from_slice(&((body.len() * 8) as u64).to_le_bytes());
            offset += body.len();
        }
        for (_, body) in &sections {
            out.extend_from_slice(body);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.bytes(4)? != MAGIC {
            return Err(Error::Format("missing ARMQ magic".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let _flags = r.u16()?;
        let n = r.u64()? as usize;
        let epsilon = r.f64()?;
        check_epsilon(epsilon).map_err(|e| Error::Format(e.to_string()))?;
        if n == 0 {
            return Err(Error::Format("empty index".into()));
        }
        let count = r.u32()?;
        let mut low = None;
        let mut levels = None;
        let mut quad = None;
        for _ in 0..count {
            let id = r.u32()?;
            let offset = r.u64()? as usize;
            let bits = r.u64()? as usize;
            if bits % 8 != 0 {
                return Err(Error::Format(format!("section {id} is not byte aligned")));
            }
            let body = offset
                .checked_add(bits / 8)
                .and_then(|end| bytes.get(offset..end))
                .ok_or_else(|| Error::Format(format!("section {id} lies outside the file")))?;
            let mut s = Reader::new(body);
            match id {
                SECTION_LOW => low = Some(LowFreqIndex::read_from(&mut s, n)?),
                SECTION_LEVELS => levels = Some(read_levels(&mut s, n, epsilon)?),
                SECTION_QUAD => quad = Some(QuadApproxIndex::read_from(&mut s, n)?),
                // Unknown sections are skipped.
                _ => continue,
            }
            s.finish()?;
        }
        let missing = |name: &str| Error::Format(format!("missing {name} section"));
        Self::from_parts(
            n,
            epsilon,
            low.ok_or_else(|| missing("low-frequency"))?,
            levels.ok_or_else(|| missing("levels"))?,
            quad.ok_or_else(|| missing("quad"))?,
        )
    }

    /// `(component id, byte offset, bit length)` of each section.
    pub fn section_table(bytes: &[u8]) -> Result<Vec<(u32, u64, u64)>> {
        let mut r = Reader::new(bytes);
        r.bytes(HEADER_BYTES - 4)?;
        let count = r.u32()?;
        (0..count)
            .map(|_| Ok((r.u32()?, r.u64()?, r.u64()?)))
            .collect()
    }
}

fn read_levels(r: &mut Reader<'_>, n: usize, epsilon: f64) -> Result<Vec<Level>> {
    let count = r.u32()? as usize;
    let (plan, _) = level_plan(n, epsilon);
    if count != plan.len() {
        return Err(Error::Format(format!(
            "{count} levels stored, {} expected",
            plan.len()
        )));
    }
    plan.into_iter().map(|p| Level::read_from(r, n, p)).collect()
}
