//! Byte layouts for the index buffer and for stream messages.
//!
//! All integers are little-endian. A message is a type byte, a `u32`
//! payload length and the payload:
//!
//! | type | message  | payload |
//! |------|----------|---------|
//! | 0x01 | Hello    | width u32, height u32, channels u8, fps_num u16, fps_den u16, flags u8 |
//! | 0x02 | RefFrame | frame_no u32, raw_len u32, compressed samples |
//! | 0x03 | Delta    | frame_no u32, then for index and diff: raw_len u32, comp_len u32, bytes |
//! | 0x04 | End      | empty |
//!
//! Hello flag bit 0 marks a baseline-mode stream, bit 1 a 4:2:0 plane layout.
//! Payload bytes are opaque here; compressing them is the caller's job.

use alloc::vec::Vec;

use thiserror::Error;

use crate::delta::{IndexCode, IndexEntry};
use crate::encode::EncoderMode;
use crate::error::FrameError;
use crate::frame::{FrameGeometry, PlaneLayout};

pub const INDEX_ENTRY_LEN: usize = 5;
pub const MESSAGE_HEADER_LEN: usize = 5;
pub const HELLO_PAYLOAD_LEN: usize = 14;

pub const TYPE_HELLO: u8 = 0x01;
pub const TYPE_REF_FRAME: u8 = 0x02;
pub const TYPE_DELTA: u8 = 0x03;
pub const TYPE_END: u8 = 0x04;

const FLAG_BASELINE: u8 = 0x01;
const FLAG_YUV420: u8 = 0x02;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("index buffer length {0} is not a multiple of 5")]
    BadLength(usize),
    #[error("unknown index code {0}")]
    UnknownCode(i8),
    #[error("message truncated: need {needed} bytes, have {available}")]
    TruncatedMessage { needed: usize, available: usize },
    #[error("unknown message type 0x{0:02x}")]
    UnknownType(u8),
    #[error("payload length does not match its contents")]
    PayloadLengthMismatch,
    #[error("hello carries unknown flag bits 0x{0:02x}")]
    UnknownFlags(u8),
    #[error("hello carries an invalid geometry: {0}")]
    InvalidGeometry(#[from] FrameError),
}

/// Encodes each entry as a signed code byte followed by a `u32` count.
pub fn serialize_index(index: &[IndexEntry]) -> Vec<u8> {
    let mut out = Vec::with_capacity(index.len() * INDEX_ENTRY_LEN);
    for entry in index {
        out.push(entry.code.wire_value() as u8);
        out.extend_from_slice(&entry.count.to_le_bytes());
    }
    out
}

pub fn deserialize_index(bytes: &[u8]) -> Result<Vec<IndexEntry>, WireError> {
    if !bytes.len().is_multiple_of(INDEX_ENTRY_LEN) {
        return Err(WireError::BadLength(bytes.len()));
    }
    bytes
        .chunks_exact(INDEX_ENTRY_LEN)
        .map(|chunk| {
            let raw = chunk[0] as i8;
            let code = IndexCode::from_wire(raw).ok_or(WireError::UnknownCode(raw))?;
            let count = u32::from_le_bytes([chunk[1], chunk[2], chunk[3], chunk[4]]);
            Ok(IndexEntry { code, count })
        })
        .collect()
}

/// Session parameters announced before any frame data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hello {
    pub geometry: FrameGeometry,
    pub fps_num: u16,
    pub fps_den: u16,
    pub mode: EncoderMode,
}

/// A compressed buffer together with its decompressed length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Block {
    pub raw_len: u32,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamMessage {
    Hello(Hello),
    RefFrame {
        frame_no: u32,
        samples: Block,
    },
    Delta {
        frame_no: u32,
        index: Block,
        diff: Block,
    },
    End,
}

impl StreamMessage {
    pub fn type_byte(&self) -> u8 {
        match self {
            StreamMessage::Hello(_) => TYPE_HELLO,
            StreamMessage::RefFrame { .. } => TYPE_REF_FRAME,
            StreamMessage::Delta { .. } => TYPE_DELTA,
            StreamMessage::End => TYPE_END,
        }
    }

    pub fn frame_no(&self) -> Option<u32> {
        match self {
            StreamMessage::RefFrame { frame_no, .. } | StreamMessage::Delta { frame_no, .. } => {
                Some(*frame_no)
            }
            _ => None,
        }
    }

    fn payload_len(&self) -> usize {
        match self {
            StreamMessage::Hello(_) => HELLO_PAYLOAD_LEN,
            StreamMessage::RefFrame { samples, .. } => 8 + samples.bytes.len(),
            StreamMessage::Delta { index, diff, .. } => {
                4 + 8 + index.bytes.len() + 8 + diff.bytes.len()
            }
            StreamMessage::End => 0,
        }
    }

    /// Size of the framed message in bytes.
    pub fn wire_len(&self) -> usize {
        MESSAGE_HEADER_LEN + self.payload_len()
    }
}

pub fn frame_message(msg: &StreamMessage) -> Vec<u8> {
    let mut out = Vec::with_capacity(msg.wire_len());
    out.push(msg.type_byte());
    out.extend_from_slice(&(msg.payload_len() as u32).to_le_bytes());
    match msg {
        StreamMessage::Hello(hello) => {
            let g = hello.geometry;
            out.extend_from_slice(&g.width().to_le_bytes());
            out.extend_from_slice(&g.height().to_le_bytes());
            out.push(g.channels());
            out.extend_from_slice(&hello.fps_num.to_le_bytes());
            out.extend_from_slice(&hello.fps_den.to_le_bytes());
            let mut flags = 0;
            if hello.mode == EncoderMode::StandardBaseline {
                flags |= FLAG_BASELINE;
            }
            if g.layout() == PlaneLayout::Yuv420 {
                flags |= FLAG_YUV420;
            }
            out.push(flags);
        }
        StreamMessage::RefFrame { frame_no, samples } => {
            out.extend_from_slice(&frame_no.to_le_bytes());
            out.extend_from_slice(&samples.raw_len.to_le_bytes());
            out.extend_from_slice(&samples.bytes);
        }
        StreamMessage::Delta {
            frame_no,
            index,
            diff,
        } => {
            out.extend_from_slice(&frame_no.to_le_bytes());
            for block in [index, diff] {
                out.extend_from_slice(&block.raw_len.to_le_bytes());
                out.extend_from_slice(&(block.bytes.len() as u32).to_le_bytes());
                out.extend_from_slice(&block.bytes);
            }
        }
        StreamMessage::End => {}
    }
    out
}

/// Parses one message from the front of `bytes`, returning it together with
/// the number of bytes consumed.
pub fn parse_message(bytes: &[u8]) -> Result<(StreamMessage, usize), WireError> {
    let Some(&ty) = bytes.first() else {
        return Err(WireError::TruncatedMessage {
            needed: MESSAGE_HEADER_LEN,
            available: 0,
        });
    };
    if !(TYPE_HELLO..=TYPE_END).contains(&ty) {
        return Err(WireError::UnknownType(ty));
    }
    if bytes.len() < MESSAGE_HEADER_LEN {
        return Err(WireError::TruncatedMessage {
            needed: MESSAGE_HEADER_LEN,
            available: bytes.len(),
        });
    }
    let payload_len = u32::from_le_bytes([bytes[1], bytes[2], bytes[3], bytes[4]]) as usize;
    let total = MESSAGE_HEADER_LEN + payload_len;
    if bytes.len() < total {
        return Err(WireError::TruncatedMessage {
            needed: total,
            available: bytes.len(),
        });
    }
    let mut payload = Reader(&bytes[MESSAGE_HEADER_LEN..total]);
    let msg = match ty {
        TYPE_HELLO => {
            if payload_len != HELLO_PAYLOAD_LEN {
                return Err(WireError::PayloadLengthMismatch);
            }
            let width = payload.u32()?;
            let height = payload.u32()?;
            let channels = payload.u8()?;
            let fps_num = payload.u16()?;
            let fps_den = payload.u16()?;
            let flags = payload.u8()?;
            if flags & !(FLAG_BASELINE | FLAG_YUV420) != 0 {
                return Err(WireError::UnknownFlags(flags));
            }
            let layout = if flags & FLAG_YUV420 != 0 {
                PlaneLayout::Yuv420
            } else {
                PlaneLayout::Packed
            };
            let mode = if flags & FLAG_BASELINE != 0 {
                EncoderMode::StandardBaseline
            } else {
                EncoderMode::SpatioTemporal
            };
            StreamMessage::Hello(Hello {
                geometry: FrameGeometry::with_layout(width, height, channels, layout)?,
                fps_num,
                fps_den,
                mode,
            })
        }
        TYPE_REF_FRAME => {
            let frame_no = payload.u32()?;
            let raw_len = payload.u32()?;
            StreamMessage::RefFrame {
                frame_no,
                samples: Block {
                    raw_len,
                    bytes: payload.rest().to_vec(),
                },
            }
        }
        TYPE_DELTA => {
            let frame_no = payload.u32()?;
            let index = payload.block()?;
            let diff = payload.block()?;
            if !payload.rest().is_empty() {
                return Err(WireError::PayloadLengthMismatch);
            }
            StreamMessage::Delta {
                frame_no,
                index,
                diff,
            }
        }
        _ => {
            if payload_len != 0 {
                return Err(WireError::PayloadLengthMismatch);
            }
            StreamMessage::End
        }
    };
    Ok((msg, total))
}

/// Cursor over a payload whose length is already known to be complete, so
/// running short is a length mismatch rather than truncation.
struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.0.len() < n {
            return Err(WireError::PayloadLengthMismatch);
        }
        let (head, tail) = self.0.split_at(n);
        self.0 = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, WireError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, WireError> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn block(&mut self) -> Result<Block, WireError> {
        let raw_len = self.u32()?;
        let comp_len = self.u32()? as usize;
        let bytes = self.take(comp_len)?.to_vec();
        Ok(Block { raw_len, bytes })
    }

    fn rest(&mut self) -> &'a [u8] {
        core::mem::take(&mut self.0)
    }
}

/// Accumulates bytes as they arrive and yields complete messages.
#[derive(Debug, Default)]
pub struct MessageParser {
    buf: Vec<u8>,
}

impl MessageParser {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    /// Bytes received but not yet returned as a message.
    pub fn buffered(&self) -> usize {
        self.buf.len()
    }

    /// Returns the next complete message, or `None` if more bytes are needed.
    pub fn next_message(&mut self) -> Result<Option<StreamMessage>, WireError> {
        match parse_message(&self.buf) {
            Ok((msg, used)) => {
                self.buf.drain(..used);
                Ok(Some(msg))
            }
            Err(WireError::TruncatedMessage { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}
