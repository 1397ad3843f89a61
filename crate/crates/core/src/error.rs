use thiserror::Error;

/// Errors raised while constructing a geometry or a frame.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame dimensions must be positive (got {width}x{height})")]
    ZeroDimension { width: u32, height: u32 },
    #[error("unsupported channel count {0}; expected 1 or 3")]
    BadChannels(u8),
    #[error("4:2:0 layout requires a single luma channel")]
    LayoutChannels,
    #[error("frame has more samples than fit in 32 bits")]
    TooManySamples,
    #[error("sample buffer holds {actual} values, geometry needs {expected}")]
    LengthMismatch { expected: usize, actual: usize },
}

/// A [`FrameDelta`](crate::FrameDelta) that breaks one of its structural rules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("index covers {actual} samples, frame has {expected}")]
    CountMismatch { expected: u64, actual: u64 },
    #[error("index consumes {expected} difference samples, buffer holds {actual}")]
    DiffMismatch { expected: u64, actual: u64 },
    #[error("index entry {position} has an invalid count for its code")]
    BadEntry { position: usize },
    #[error("an equal-frames entry must be the only entry and carry no difference samples")]
    LoneEqualViolated,
}

/// Encoder-side failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("reference and new frame have different geometry")]
    GeometryMismatch,
    #[error("minimum repeat run must be at least 2 (got {0})")]
    InvalidMinRun(u32),
}

/// Decoder-side failures. Each one means the stream is corrupt or was paired
/// with the wrong reference.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("invalid delta: {0}")]
    InvalidDelta(#[from] ValidationError),
    #[error("difference buffer exhausted at entry {position}")]
    DiffExhausted { position: usize },
    #[error("entry {position} writes past the end of the frame")]
    CursorOverrun { position: usize },
    #[error("prefix of {requested} entries requested, delta has {available}")]
    PrefixOutOfRange { requested: usize, available: usize },
    #[error("delta received before any reference frame")]
    NoReference,
}
