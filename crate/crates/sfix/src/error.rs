use std::io;

use sfix_core::wire::WireError;
use sfix_core::{CodecError, DecodeError, FrameError};
use thiserror::Error;

use crate::compress::CompressError;
use crate::ingest::IngestError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("compression: {0}")]
    Compress(#[from] CompressError),
    #[error("wire format: {0}")]
    Wire(#[from] WireError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("decode failure: {0}")]
    Decode(#[from] DecodeError),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("not an sfix container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated container: stream ends before the end-of-stream marker")]
    TruncatedContainer,
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: io::Error },
    #[error("cannot connect to {addr}: {source}")]
    Connect { addr: String, source: io::Error },
    #[error("frame rate {0} cannot be carried in a hello message")]
    FrameRate(crate::ingest::Fps),
    #[error("benchmark needs at least two frames, source yielded {0}")]
    SourceTooShort(usize),
    #[error("round trip failed on frame {0}")]
    RoundTrip(u32),
    #[error("report: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn protocol(msg: impl Into<String>) -> Self {
        Error::Protocol(msg.into())
    }
}
