//! Per-stream reference bookkeeping for either end of a session.

use crate::decode::decode_delta;
use crate::delta::FrameDelta;
use crate::encode::{advance_reference, encode_delta, EncoderConfig};
use crate::error::{CodecError, DecodeError};
use crate::frame::{Frame, FrameGeometry};

/// Result of pushing one frame into an [`EncoderSession`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Encoded {
    /// First frame of the stream; it is sent whole and becomes the reference.
    Reference {
        frame_no: u32,
    },
    Delta {
        frame_no: u32,
        delta: FrameDelta,
    },
}

/// Server-side state: the configuration and the frame last emitted.
#[derive(Debug, Clone)]
pub struct EncoderSession {
    config: EncoderConfig,
    geometry: FrameGeometry,
    reference: Option<Frame>,
    next_frame_no: u32,
}

impl EncoderSession {
    pub fn new(geometry: FrameGeometry, config: EncoderConfig) -> Self {
        Self {
            config,
            geometry,
            reference: None,
            next_frame_no: 0,
        }
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    pub fn geometry(&self) -> FrameGeometry {
        self.geometry
    }

    /// The last frame pushed, if any.
    pub fn reference(&self) -> Option<&Frame> {
        self.reference.as_ref()
    }

    /// Number of the most recently pushed frame.
    pub fn current_frame_no(&self) -> Option<u32> {
        self.next_frame_no.checked_sub(1)
    }

    pub fn push(&mut self, frame: Frame) -> Result<Encoded, CodecError> {
        if frame.geometry() != self.geometry {
            return Err(CodecError::GeometryMismatch);
        }
        let frame_no = self.next_frame_no;
        let out = match self.reference.take() {
            None => {
                self.reference = Some(frame);
                Encoded::Reference { frame_no }
            }
            Some(reference) => {
                let delta = encode_delta(&reference, &frame, &self.config)?;
                self.reference = Some(advance_reference(&reference, frame)?);
                Encoded::Delta { frame_no, delta }
            }
        };
        self.next_frame_no += 1;
        Ok(out)
    }
}

/// Client-side state: the last reconstructed frame.
#[derive(Debug, Clone, Default)]
pub struct DecoderSession {
    reference: Option<Frame>,
}

impl DecoderSession {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reference(&self) -> Option<&Frame> {
        self.reference.as_ref()
    }

    pub fn set_reference(&mut self, frame: Frame) {
        self.reference = Some(frame);
    }

    /// Decodes `delta` against the current reference and makes the result
    /// the new reference.
    pub fn apply(&mut self, delta: &FrameDelta) -> Result<&Frame, DecodeError> {
        let reference = self.reference.as_ref().ok_or(DecodeError::NoReference)?;
        let next = decode_delta(reference, delta)?;
        Ok(self.reference.insert(next))
    }
}
