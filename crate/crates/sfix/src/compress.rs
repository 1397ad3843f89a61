//! Raw DEFLATE for the reference, index and difference buffers.

use std::io::{Read, Write};

use flate2::read::DeflateDecoder;
use flate2::write::DeflateEncoder;
use flate2::Compression;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressError {
    #[error("corrupt deflate stream")]
    CorruptStream,
    #[error("decompressed {actual} bytes, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
}

pub fn compress(bytes: &[u8]) -> Vec<u8> {
    let mut enc = DeflateEncoder::new(
        Vec::with_capacity(bytes.len() / 2 + 16),
        Compression::default(),
    );
    enc.write_all(bytes).expect("writing to a Vec cannot fail");
    enc.finish().expect("writing to a Vec cannot fail")
}

/// Inflates `bytes`, refusing to produce more than `expected_raw_len` bytes.
pub fn decompress(bytes: &[u8], expected_raw_len: usize) -> Result<Vec<u8>, CompressError> {
    let mut out = Vec::with_capacity(expected_raw_len);
    DeflateDecoder::new(bytes)
        .take(expected_raw_len as u64 + 1)
        .read_to_end(&mut out)
        .map_err(|_| CompressError::CorruptStream)?;
    if out.len() != expected_raw_len {
        return Err(CompressError::LengthMismatch {
            expected: expected_raw_len,
            actual: out.len(),
        });
    }
    Ok(out)
}
