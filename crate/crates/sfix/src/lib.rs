//! Streaming, file formats and measurement around the `sfix-core` codec.
//!
//! - [`ingest`]: Y4M / raw readers and writers and a synthetic low-motion
//!   generator.
//! - [`codec`] and [`compress`]: DEFLATE-compressed message payloads.
//! - [`container`]: the `.sfix` file format.
//! - [`net`]: TCP server with per-client bounded queues, and the receiver.
//! - [`bench`]: per-frame metrics and CSV reports.
//! - [`cli`]: the `sfix` binary.

pub mod bench;
pub mod cli;
pub mod codec;
pub mod compress;
pub mod container;
mod error;
pub mod ingest;
pub mod net;
pub mod session;

pub use error::{Error, Result};
pub use sfix_core;
