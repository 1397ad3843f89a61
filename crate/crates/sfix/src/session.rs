//! Receiver-side message sequencing shared by the network client and the
//! container decoder.

use std::time::Instant;

use sfix_core::wire::{Hello, StreamMessage};
use sfix_core::{DecoderSession, Frame};

use crate::codec::{unpack_delta, unpack_reference};
use crate::error::{Error, Result};
use crate::ingest::Fps;

#[derive(Debug)]
pub enum SessionEvent<'a> {
    Started(Hello),
    Frame { frame_no: u32, frame: &'a Frame },
    Ended,
}

/// What it took to rebuild one delta frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaStats {
    pub frame_no: u32,
    pub diff_samples: usize,
    pub index_entries: usize,
    pub wire_bytes: usize,
    /// Wall time of the reconstruction step alone.
    pub build_seconds: f64,
}

#[derive(Debug, Default)]
pub struct ClientSession {
    hello: Option<Hello>,
    decoder: DecoderSession,
    last_frame_no: Option<u32>,
    ended: bool,
    last_stats: Option<DeltaStats>,
}

impl ClientSession {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hello(&self) -> Option<&Hello> {
        self.hello.as_ref()
    }

    pub fn reference(&self) -> Option<&Frame> {
        self.decoder.reference()
    }

    pub fn is_ended(&self) -> bool {
        self.ended
    }

    /// Stats of the most recently applied delta.
    pub fn last_stats(&self) -> Option<DeltaStats> {
        self.last_stats
    }

    pub fn apply(&mut self, msg: &StreamMessage) -> Result<SessionEvent<'_>> {
        if self.ended {
            return Err(Error::protocol("message after end of stream"));
        }
        let hello = match (&self.hello, msg) {
            (None, StreamMessage::Hello(h)) => {
                if Fps::new(h.fps_num.into(), h.fps_den.into()).is_none() {
                    return Err(Error::protocol("hello announces a zero frame rate"));
                }
                self.hello = Some(*h);
                return Ok(SessionEvent::Started(*h));
            }
            (None, _) => return Err(Error::protocol("stream does not start with hello")),
            (Some(_), StreamMessage::Hello(_)) => return Err(Error::protocol("duplicate hello")),
            (Some(h), _) => *h,
        };
        self.last_stats = None;
        match msg {
            StreamMessage::RefFrame { frame_no, samples } => {
                if self.decoder.reference().is_some() {
                    return Err(Error::protocol("second reference frame in one session"));
                }
                let frame = unpack_reference(samples, hello.geometry)?;
                self.decoder.set_reference(frame);
                self.last_frame_no = Some(*frame_no);
                Ok(SessionEvent::Frame {
                    frame_no: *frame_no,
                    frame: self.decoder.reference().expect("just set"),
                })
            }
            StreamMessage::Delta {
                frame_no,
                index,
                diff,
            } => {
                let Some(last) = self.last_frame_no else {
                    return Err(Error::protocol("delta before reference frame"));
                };
                if Some(*frame_no) != last.checked_add(1) {
                    return Err(Error::protocol(format!(
                        "frame {frame_no} follows frame {last}"
                    )));
                }
                let delta = unpack_delta(index, diff, hello.geometry)?;
                let started = Instant::now();
                self.decoder.apply(&delta)?;
                let build_seconds = started.elapsed().as_secs_f64();
                self.last_frame_no = Some(*frame_no);
                self.last_stats = Some(DeltaStats {
                    frame_no: *frame_no,
                    diff_samples: delta.diff().len(),
                    index_entries: delta.index().len(),
                    wire_bytes: msg.wire_len(),
                    build_seconds,
                });
                Ok(SessionEvent::Frame {
                    frame_no: *frame_no,
                    frame: self.decoder.reference().expect("just decoded"),
                })
            }
            StreamMessage::End => {
                self.ended = true;
                Ok(SessionEvent::Ended)
            }
            StreamMessage::Hello(_) => unreachable!("handled above"),
        }
    }
}
