//! `.sfix` files: `SFIX`, a version byte, then a session's message stream
//! from Hello through End exactly as it would go over the wire.

use std::io::{Read, Write};

use sfix_core::wire::{Hello, StreamMessage};
use sfix_core::{Encoded, EncoderConfig, EncoderSession};

use crate::codec::{delta_message, hello_for, read_message, reference_message, write_message};
use crate::error::{Error, Result};
use crate::ingest::{Fps, FrameSink, VideoSource};
use crate::session::{ClientSession, SessionEvent};

pub const MAGIC: [u8; 4] = *b"SFIX";
pub const VERSION: u8 = 0x01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodeSummary {
    pub frames: u32,
    /// Size of the whole container in bytes.
    pub wire_bytes: u64,
    /// Mean difference-buffer percentage over delta frames; 0 if there are none.
    pub mean_diff_pct: f64,
}

pub fn encode_container<W: Write>(
    source: &mut dyn VideoSource,
    config: EncoderConfig,
    mut out: W,
) -> Result<EncodeSummary> {
    let geometry = source.geometry();
    let hello = hello_for(geometry, source.fps(), config.mode())?;
    out.write_all(&MAGIC)?;
    out.write_all(&[VERSION])?;
    let mut wire_bytes = 5 + write_message(&mut out, &StreamMessage::Hello(hello))? as u64;

    let mut session = EncoderSession::new(geometry, config);
    let mut frames = 0;
    let mut pct_sum = 0.0;
    while let Some(frame) = source.next_frame()? {
        let msg = match session.push(frame)? {
            Encoded::Reference { frame_no } => {
                reference_message(frame_no, session.reference().expect("just pushed"))
            }
            Encoded::Delta { frame_no, delta } => {
                pct_sum += 100.0 * delta.diff().len() as f64 / f64::from(geometry.total_samples());
                delta_message(frame_no, &delta)
            }
        };
        wire_bytes += write_message(&mut out, &msg)? as u64;
        frames += 1;
    }
    wire_bytes += write_message(&mut out, &StreamMessage::End)? as u64;
    out.flush()?;
    Ok(EncodeSummary {
        frames,
        wire_bytes,
        mean_diff_pct: if frames > 1 {
            pct_sum / f64::from(frames - 1)
        } else {
            0.0
        },
    })
}

/// Message-level access to a container.
pub struct ContainerReader<R> {
    input: R,
    done: bool,
}

impl<R: Read> ContainerReader<R> {
    pub fn new(mut input: R) -> Result<Self> {
        let mut head = [0u8; 5];
        input.read_exact(&mut head).map_err(|_| Error::BadMagic)?;
        if head[..4] != MAGIC {
            return Err(Error::BadMagic);
        }
        if head[4] != VERSION {
            return Err(Error::UnsupportedVersion(head[4]));
        }
        Ok(Self { input, done: false })
    }

    /// The next message; `None` after End has been returned.
    pub fn next_message(&mut self) -> Result<Option<StreamMessage>> {
        if self.done {
            return Ok(None);
        }
        let msg = match read_message(&mut self.input) {
            Ok(Some(msg)) => msg,
            Ok(None) => return Err(Error::TruncatedContainer),
            Err(Error::Wire(sfix_core::wire::WireError::TruncatedMessage { .. })) => {
                return Err(Error::TruncatedContainer)
            }
            Err(e) => return Err(e),
        };
        self.done = msg == StreamMessage::End;
        Ok(Some(msg))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeSummary {
    pub hello: Hello,
    pub frames: u32,
}

/// Replays a container into `sink`.
pub fn decode_container<R: Read>(input: R, sink: &mut dyn FrameSink) -> Result<DecodeSummary> {
    let mut reader = ContainerReader::new(input)?;
    let mut session = ClientSession::new();
    let mut frames = 0;
    while let Some(msg) = reader.next_message()? {
        match session.apply(&msg)? {
            SessionEvent::Started(h) => {
                let fps = Fps::new(h.fps_num.into(), h.fps_den.into()).expect("checked by session");
                sink.begin(h.geometry, fps)?;
            }
            SessionEvent::Frame { frame_no, frame } => {
                sink.frame(frame_no, frame)?;
                frames += 1;
            }
            SessionEvent::Ended => {}
        }
    }
    sink.finish()?;
    Ok(DecodeSummary {
        hello: *session.hello().expect("session started"),
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CollectSink, MemorySource};
    use sfix_core::{Frame, FrameGeometry};

    fn source(n: usize) -> MemorySource {
        let g = FrameGeometry::new(5, 3, 1).unwrap();
        let frames = (0..n)
            .map(|k| {
                Frame::new(
                    g,
                    (0..15).map(|i| if i < k { 9 } else { i as u8 }).collect(),
                )
                .unwrap()
            })
            .collect();
        MemorySource::new(g, Fps { num: 25, den: 1 }, frames)
    }

    #[test]
    fn round_trip() {
        let mut bytes = Vec::new();
        let summary =
            encode_container(&mut source(6), EncoderConfig::default(), &mut bytes).unwrap();
        assert_eq!(summary.frames, 6);
        assert_eq!(summary.wire_bytes as usize, bytes.len());
        let mut sink = CollectSink::default();
        let decoded = decode_container(bytes.as_slice(), &mut sink).unwrap();
        assert_eq!(decoded.frames, 6);
        let expected: Vec<Frame> = crate::ingest::collect_frames(&mut source(6)).unwrap();
        let got: Vec<Frame> = sink.frames.into_iter().map(|(_, f)| f).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn empty_source_is_hello_and_end() {
        let mut bytes = Vec::new();
        encode_container(&mut source(0), EncoderConfig::default(), &mut bytes).unwrap();
        let mut reader = ContainerReader::new(bytes.as_slice()).unwrap();
        assert!(matches!(
            reader.next_message().unwrap(),
            Some(StreamMessage::Hello(_))
        ));
        assert_eq!(reader.next_message().unwrap(), Some(StreamMessage::End));
        assert_eq!(reader.next_message().unwrap(), None);
    }

    #[test]
    fn header_checks() {
        let mut bytes = Vec::new();
        encode_container(&mut source(2), EncoderConfig::default(), &mut bytes).unwrap();
        let mut v2 = bytes.clone();
        v2[4] = 0x02;
        assert!(matches!(
            decode_container(v2.as_slice(), &mut CollectSink::default()),
            Err(Error::UnsupportedVersion(2))
        ));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            decode_container(bad.as_slice(), &mut CollectSink::default()),
            Err(Error::BadMagic)
        ));
        for cut in [bytes.len() - 1, bytes.len() - 5, 12] {
            assert!(
                matches!(
                    decode_container(&bytes[..cut], &mut CollectSink::default()),
                    Err(Error::TruncatedContainer)
                ),
                "cut at {cut}"
            );
        }
    }
}
