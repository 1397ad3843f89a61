use alloc::vec::Vec;

use crate::delta::{FrameDelta, IndexEntry};
use crate::error::CodecError;
use crate::frame::Frame;

/// Which redundancy the encoder exploits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EncoderMode {
    /// Temporal copies plus collapsing of repeated changed values.
    #[default]
    SpatioTemporal,
    /// Temporal copies only; every changed sample is sent literally.
    StandardBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncoderConfig {
    mode: EncoderMode,
    min_repeat_run: u32,
}

impl EncoderConfig {
    pub const DEFAULT_MIN_REPEAT_RUN: u32 = 3;

    /// `min_repeat_run` must be at least 2.
    pub fn new(mode: EncoderMode, min_repeat_run: u32) -> Result<Self, CodecError> {
        if min_repeat_run < 2 {
            return Err(CodecError::InvalidMinRun(min_repeat_run));
        }
        Ok(Self {
            mode,
            min_repeat_run,
        })
    }

    pub fn spatio_temporal() -> Self {
        Self::default()
    }

    pub fn baseline() -> Self {
        Self {
            mode: EncoderMode::StandardBaseline,
            min_repeat_run: Self::DEFAULT_MIN_REPEAT_RUN,
        }
    }

    pub fn mode(&self) -> EncoderMode {
        self.mode
    }

    pub fn min_repeat_run(&self) -> u32 {
        self.min_repeat_run
    }
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            mode: EncoderMode::SpatioTemporal,
            min_repeat_run: Self::DEFAULT_MIN_REPEAT_RUN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunKind {
    Equal,
    Differing,
}

/// A maximal stretch of the position-wise equality mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RunSegment {
    pub kind: RunKind,
    pub start: u32,
    pub length: u32,
}

impl RunSegment {
    pub fn range(&self) -> core::ops::Range<usize> {
        self.start as usize..(self.start + self.length) as usize
    }
}

/// Splits the two frames into alternating Equal / Differing runs covering
/// every sample.
pub fn segment_runs(reference: &Frame, new: &Frame) -> Result<Vec<RunSegment>, CodecError> {
    if reference.geometry() != new.geometry() {
        return Err(CodecError::GeometryMismatch);
    }
    let (a, b) = (reference.samples(), new.samples());
    let mut runs = Vec::new();
    let mut start = 0usize;
    while start < a.len() {
        let equal = a[start] == b[start];
        let len = a[start..]
            .iter()
            .zip(&b[start..])
            .take_while(|(x, y)| (x == y) == equal)
            .count();
        runs.push(RunSegment {
            kind: if equal {
                RunKind::Equal
            } else {
                RunKind::Differing
            },
            start: start as u32,
            length: len as u32,
        });
        start += len;
    }
    Ok(runs)
}

/// Encodes `new` against `reference`.
pub fn encode_delta(
    reference: &Frame,
    new: &Frame,
    config: &EncoderConfig,
) -> Result<FrameDelta, CodecError> {
    let runs = segment_runs(reference, new)?;
    if let [only] = runs.as_slice() {
        if only.kind == RunKind::Equal {
            return Ok(FrameDelta::equal_frames());
        }
    }

    let samples = new.samples();
    let mut index = Vec::with_capacity(runs.len());
    let mut diff = Vec::new();
    for run in &runs {
        match (run.kind, config.mode) {
            (RunKind::Equal, _) => index.push(IndexEntry::copy_from_ref(run.length)),
            (RunKind::Differing, EncoderMode::StandardBaseline) => {
                index.push(IndexEntry::copy_from_diff(run.length));
                diff.extend_from_slice(&samples[run.range()]);
            }
            (RunKind::Differing, EncoderMode::SpatioTemporal) => push_differing(
                &samples[run.range()],
                config.min_repeat_run as usize,
                &mut index,
                &mut diff,
            ),
        }
    }
    Ok(FrameDelta::from_parts(index, diff))
}

/// Greedy left-to-right split of one differing run into literal stretches
/// and repeat runs of at least `min_run` equal values.
fn push_differing(values: &[u8], min_run: usize, index: &mut Vec<IndexEntry>, diff: &mut Vec<u8>) {
    let mut literal_start = 0;
    let mut i = 0;
    while i < values.len() {
        let v = values[i];
        let run = values[i..].iter().take_while(|&&x| x == v).count();
        if run >= min_run {
            if literal_start < i {
                index.push(IndexEntry::copy_from_diff((i - literal_start) as u32));
                diff.extend_from_slice(&values[literal_start..i]);
            }
            index.push(IndexEntry::repeat_from_diff(run as u32));
            diff.push(v);
            literal_start = i + run;
        }
        i += run;
    }
    if literal_start < values.len() {
        index.push(IndexEntry::copy_from_diff(
            (values.len() - literal_start) as u32,
        ));
        diff.extend_from_slice(&values[literal_start..]);
    }
}

/// The frame just encoded becomes the next reference on both ends.
pub fn advance_reference(current: &Frame, just_encoded: Frame) -> Result<Frame, CodecError> {
    if current.geometry() != just_encoded.geometry() {
        return Err(CodecError::GeometryMismatch);
    }
    Ok(just_encoded)
}
