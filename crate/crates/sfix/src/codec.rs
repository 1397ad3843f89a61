//! Compressed message payloads and blocking message I/O.

use std::io::{self, Read, Write};

use sfix_core::wire::{
    deserialize_index, frame_message, parse_message, serialize_index, Block, Hello, StreamMessage,
    WireError, INDEX_ENTRY_LEN, MESSAGE_HEADER_LEN, TYPE_END, TYPE_HELLO,
};
use sfix_core::{EncoderMode, Frame, FrameDelta, FrameGeometry};

use crate::compress::{compress, decompress};
use crate::error::{Error, Result};
use crate::ingest::Fps;

/// Session announcement for a stream; the rate is reduced to fit the
/// 16-bit wire fields.
pub fn hello_for(geometry: FrameGeometry, fps: Fps, mode: EncoderMode) -> Result<Hello> {
    let r = fps.reduced();
    let (Ok(fps_num), Ok(fps_den)) = (u16::try_from(r.num), u16::try_from(r.den)) else {
        return Err(Error::FrameRate(fps));
    };
    Ok(Hello {
        geometry,
        fps_num,
        fps_den,
        mode,
    })
}

fn pack(raw: &[u8]) -> Block {
    Block {
        raw_len: raw.len() as u32,
        bytes: compress(raw),
    }
}

pub fn reference_message(frame_no: u32, frame: &Frame) -> StreamMessage {
    StreamMessage::RefFrame {
        frame_no,
        samples: pack(frame.samples()),
    }
}

pub fn delta_message(frame_no: u32, delta: &FrameDelta) -> StreamMessage {
    StreamMessage::Delta {
        frame_no,
        index: pack(&serialize_index(delta.index())),
        diff: pack(delta.diff()),
    }
}

/// Decompresses a reference payload. `raw_len` is checked against the
/// geometry before anything is inflated.
pub fn unpack_reference(samples: &Block, geometry: FrameGeometry) -> Result<Frame> {
    if samples.raw_len != geometry.total_samples() {
        return Err(Error::protocol(format!(
            "reference carries {} samples, geometry needs {}",
            samples.raw_len,
            geometry.total_samples()
        )));
    }
    let raw = decompress(&samples.bytes, samples.raw_len as usize)?;
    Ok(Frame::new(geometry, raw)?)
}

/// Decompresses and deserializes a delta payload. Validation against the
/// reference is left to the decoder.
pub fn unpack_delta(index: &Block, diff: &Block, geometry: FrameGeometry) -> Result<FrameDelta> {
    let max_index = INDEX_ENTRY_LEN as u64 * u64::from(geometry.total_samples()).max(1);
    if u64::from(index.raw_len) > max_index || diff.raw_len > geometry.total_samples() {
        return Err(Error::protocol("delta buffers larger than a frame allows"));
    }
    let index = deserialize_index(&decompress(&index.bytes, index.raw_len as usize)?)?;
    let diff = decompress(&diff.bytes, diff.raw_len as usize)?;
    Ok(FrameDelta::from_parts(index, diff))
}

pub fn write_message<W: Write + ?Sized>(out: &mut W, msg: &StreamMessage) -> io::Result<usize> {
    let bytes = frame_message(msg);
    out.write_all(&bytes)?;
    Ok(bytes.len())
}

/// Reads one framed message. `Ok(None)` means the stream ended cleanly on a
/// message boundary.
pub fn read_message<R: Read + ?Sized>(input: &mut R) -> Result<Option<StreamMessage>> {
    let mut header = [0u8; MESSAGE_HEADER_LEN];
    let got = read_up_to(input, &mut header)?;
    if got == 0 {
        return Ok(None);
    }
    if !(TYPE_HELLO..=TYPE_END).contains(&header[0]) {
        return Err(WireError::UnknownType(header[0]).into());
    }
    if got < MESSAGE_HEADER_LEN {
        return Err(WireError::TruncatedMessage {
            needed: MESSAGE_HEADER_LEN,
            available: got,
        }
        .into());
    }
    let payload_len = u32::from_le_bytes([header[1], header[2], header[3], header[4]]) as usize;
    let mut buf = header.to_vec();
    input.take(payload_len as u64).read_to_end(&mut buf)?;
    let (msg, _) = parse_message(&buf)?;
    Ok(Some(msg))
}

fn read_up_to<R: Read + ?Sized>(input: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match input.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}
