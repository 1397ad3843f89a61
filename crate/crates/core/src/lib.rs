//! Lossless inter-frame delta codec built on spatio-temporal frame indexing.
//!
//! A new frame is compared sample-by-sample against the previous (reference)
//! frame. Unchanged stretches become "copy from reference" instructions,
//! changed stretches are copied into a difference buffer, and runs of a
//! single repeated changed value collapse to one buffered sample plus a
//! replicate count. The decoder replays the instructions against its own
//! copy of the reference and gets the new frame back exactly.
//!
//! ```
//! use sfix_core::{decode_delta, encode_delta, EncoderConfig, Frame, FrameGeometry};
//!
//! let geom = FrameGeometry::new(4, 2, 1).unwrap();
//! let reference = Frame::new(geom, vec![1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
//! let next = Frame::new(geom, vec![1, 2, 9, 9, 9, 6, 7, 8]).unwrap();
//!
//! let delta = encode_delta(&reference, &next, &EncoderConfig::default()).unwrap();
//! assert_eq!(delta.diff(), &[9]);
//! assert_eq!(decode_delta(&reference, &delta).unwrap(), next);
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. Compression, file formats
//! and networking live in the `sfix` companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod decode;
mod delta;
mod encode;
mod error;
mod frame;
mod session;
pub mod wire;

pub use decode::{decode_delta, decode_prefix};
pub use delta::{validate_delta, FrameDelta, IndexCode, IndexEntry};
pub use encode::{
    advance_reference, encode_delta, segment_runs, EncoderConfig, EncoderMode, RunKind, RunSegment,
};
pub use error::{CodecError, DecodeError, FrameError, ValidationError};
pub use frame::{Frame, FrameGeometry, PlaneLayout};
pub use session::{DecoderSession, Encoded, EncoderSession};
