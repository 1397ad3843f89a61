use alloc::vec::Vec;

use crate::error::ValidationError;
use crate::frame::FrameGeometry;

/// Instruction codes of the index buffer.
///
/// Wire value `-4` is reserved and never produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexCode {
    /// The new frame is identical to the reference.
    EqualFrames,
    /// Copy `count` literal samples from the difference buffer.
    CopyFromDiff,
    /// Copy `count` samples from the reference at the same positions.
    CopyFromRef,
    /// Read one difference-buffer sample and write it `count` times.
    RepeatFromDiff,
}

impl IndexCode {
    pub const ALL: [IndexCode; 4] = [
        IndexCode::EqualFrames,
        IndexCode::CopyFromDiff,
        IndexCode::CopyFromRef,
        IndexCode::RepeatFromDiff,
    ];

    pub const fn wire_value(self) -> i8 {
        match self {
            IndexCode::EqualFrames => -1,
            IndexCode::CopyFromDiff => -2,
            IndexCode::CopyFromRef => -3,
            IndexCode::RepeatFromDiff => -5,
        }
    }

    pub const fn from_wire(value: i8) -> Option<Self> {
        match value {
            -1 => Some(IndexCode::EqualFrames),
            -2 => Some(IndexCode::CopyFromDiff),
            -3 => Some(IndexCode::CopyFromRef),
            -5 => Some(IndexCode::RepeatFromDiff),
            _ => None,
        }
    }
}

impl From<IndexCode> for i8 {
    fn from(code: IndexCode) -> i8 {
        code.wire_value()
    }
}

impl TryFrom<i8> for IndexCode {
    type Error = i8;

    fn try_from(value: i8) -> Result<Self, i8> {
        IndexCode::from_wire(value).ok_or(value)
    }
}

/// One `(code, count)` instruction. `count` is the number of output samples
/// produced, and is always 0 for [`IndexCode::EqualFrames`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexEntry {
    pub code: IndexCode,
    pub count: u32,
}

impl IndexEntry {
    pub const EQUAL_FRAMES: IndexEntry = IndexEntry {
        code: IndexCode::EqualFrames,
        count: 0,
    };

    pub const fn new(code: IndexCode, count: u32) -> Self {
        Self { code, count }
    }

    pub const fn copy_from_ref(count: u32) -> Self {
        Self::new(IndexCode::CopyFromRef, count)
    }

    pub const fn copy_from_diff(count: u32) -> Self {
        Self::new(IndexCode::CopyFromDiff, count)
    }

    pub const fn repeat_from_diff(count: u32) -> Self {
        Self::new(IndexCode::RepeatFromDiff, count)
    }

    /// Difference-buffer samples this entry reads.
    pub const fn diff_consumption(&self) -> u32 {
        match self.code {
            IndexCode::CopyFromDiff => self.count,
            IndexCode::RepeatFromDiff => 1,
            IndexCode::EqualFrames | IndexCode::CopyFromRef => 0,
        }
    }
}

impl From<(i8, u32)> for IndexEntry {
    /// Panics on an unknown code; meant for literals in tests and examples.
    fn from((code, count): (i8, u32)) -> Self {
        let code = IndexCode::from_wire(code).expect("unknown index code");
        IndexEntry { code, count }
    }
}

/// An index buffer plus the difference buffer it reads from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FrameDelta {
    index: Vec<IndexEntry>,
    diff: Vec<u8>,
}

impl FrameDelta {
    /// Assembles a delta from raw parts without checking it. Use
    /// [`validate_delta`] before trusting one that came off the wire.
    pub fn from_parts(index: Vec<IndexEntry>, diff: Vec<u8>) -> Self {
        Self { index, diff }
    }

    pub fn equal_frames() -> Self {
        Self {
            index: alloc::vec![IndexEntry::EQUAL_FRAMES],
            diff: Vec::new(),
        }
    }

    pub fn index(&self) -> &[IndexEntry] {
        &self.index
    }

    pub fn diff(&self) -> &[u8] {
        &self.diff
    }

    pub fn into_parts(self) -> (Vec<IndexEntry>, Vec<u8>) {
        (self.index, self.diff)
    }

    pub fn is_equal_frames(&self) -> bool {
        self.index.as_slice() == [IndexEntry::EQUAL_FRAMES]
    }
}

/// Checks every structural rule of `delta` against the session geometry.
pub fn validate_delta(delta: &FrameDelta, geom: &FrameGeometry) -> Result<(), ValidationError> {
    let index = delta.index();
    let has_equal = index.iter().any(|e| e.code == IndexCode::EqualFrames);
    if has_equal {
        if index.len() != 1 || !delta.diff().is_empty() {
            return Err(ValidationError::LoneEqualViolated);
        }
        if index[0].count != 0 {
            return Err(ValidationError::BadEntry { position: 0 });
        }
        return Ok(());
    }

    let mut produced: u64 = 0;
    let mut consumed: u64 = 0;
    for (position, entry) in index.iter().enumerate() {
        if entry.count == 0 {
            return Err(ValidationError::BadEntry { position });
        }
        produced += u64::from(entry.count);
        consumed += u64::from(entry.diff_consumption());
    }
    let expected = u64::from(geom.total_samples());
    if produced != expected {
        return Err(ValidationError::CountMismatch {
            expected,
            actual: produced,
        });
    }
    let available = delta.diff().len() as u64;
    if consumed != available {
        return Err(ValidationError::DiffMismatch {
            expected: consumed,
            actual: available,
        });
    }
    Ok(())
}
