//! Frame sources and sinks.

mod raw;
mod synth;
mod y4m;

use std::fmt;
use std::io;

use sfix_core::{Frame, FrameError, FrameGeometry};
use thiserror::Error;

pub use raw::{RawReader, RawSink};
pub use synth::{gen_low_motion, FillMode, SynthParams, SyntheticSource};
pub use y4m::{read_y4m, write_y4m, Y4mReader, Y4mSink, Y4mWriter};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing YUV4MPEG2 signature")]
    BadSignature,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("unsupported colorspace {0:?}")]
    UnsupportedColorspace(String),
    #[error("frame {frame}: expected {expected} bytes, got {actual}")]
    TruncatedFrame {
        frame: usize,
        expected: usize,
        actual: usize,
    },
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// Frame rate as a ratio of positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fps {
    pub num: u32,
    pub den: u32,
}

impl Fps {
    pub fn new(num: u32, den: u32) -> Option<Self> {
        (num > 0 && den > 0).then_some(Self { num, den })
    }

    pub fn frame_interval(&self) -> std::time::Duration {
        std::time::Duration::from_secs_f64(f64::from(self.den) / f64::from(self.num))
    }

    /// The same rate reduced to lowest terms.
    pub fn reduced(&self) -> Self {
        let (mut a, mut b) = (self.num, self.den);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        Self {
            num: self.num / a,
            den: self.den / a,
        }
    }
}

impl fmt::Display for Fps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.num, self.den)
    }
}

impl std::str::FromStr for Fps {
    type Err = String;

    /// Accepts `N`, `N/D` or `N:D`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (n, d) = match s.split_once(['/', ':']) {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num = n
            .trim()
            .parse()
            .map_err(|_| format!("bad frame rate {s:?}"))?;
        let den = d
            .trim()
            .parse()
            .map_err(|_| format!("bad frame rate {s:?}"))?;
        Fps::new(num, den).ok_or_else(|| format!("frame rate {s:?} must be positive"))
    }
}

/// A pull-based feed of frames sharing one geometry.
pub trait VideoSource {
    fn geometry(&self) -> FrameGeometry;

    fn fps(&self) -> Fps;

    /// The next frame, or `None` once the source is exhausted.
    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError>;
}

impl<S: VideoSource + ?Sized> VideoSource for Box<S> {
    fn geometry(&self) -> FrameGeometry {
        (**self).geometry()
    }

    fn fps(&self) -> Fps {
        (**self).fps()
    }

    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError> {
        (**self).next_frame()
    }
}

/// Frames already in memory.
#[derive(Debug, Clone)]
pub struct MemorySource {
    geometry: FrameGeometry,
    fps: Fps,
    frames: std::collections::VecDeque<Frame>,
}

impl MemorySource {
    /// Panics if a frame's geometry differs from `geometry`.
    pub fn new(geometry: FrameGeometry, fps: Fps, frames: Vec<Frame>) -> Self {
        assert!(frames.iter().all(|f| f.geometry() == geometry));
        Self {
            geometry,
            fps,
            frames: frames.into(),
        }
    }
}

impl VideoSource for MemorySource {
    fn geometry(&self) -> FrameGeometry {
        self.geometry
    }

    fn fps(&self) -> Fps {
        self.fps
    }

    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError> {
        Ok(self.frames.pop_front())
    }
}

/// Drains a source into memory.
pub fn collect_frames(source: &mut dyn VideoSource) -> Result<Vec<Frame>, IngestError> {
    let mut frames = Vec::new();
    while let Some(f) = source.next_frame()? {
        frames.push(f);
    }
    Ok(frames)
}

/// Receives reconstructed frames in order.
pub trait FrameSink {
    fn begin(&mut self, geometry: FrameGeometry, fps: Fps) -> io::Result<()>;

    fn frame(&mut self, frame_no: u32, frame: &Frame) -> io::Result<()>;

    fn finish(&mut self) -> io::Result<()> {
        Ok(())
    }
}

/// Keeps every frame it is given.
#[derive(Debug, Default)]
pub struct CollectSink {
    pub geometry: Option<FrameGeometry>,
    pub fps: Option<Fps>,
    pub frames: Vec<(u32, Frame)>,
}

impl FrameSink for CollectSink {
    fn begin(&mut self, geometry: FrameGeometry, fps: Fps) -> io::Result<()> {
        self.geometry = Some(geometry);
        self.fps = Some(fps);
        Ok(())
    }

    fn frame(&mut self, frame_no: u32, frame: &Frame) -> io::Result<()> {
        self.frames.push((frame_no, frame.clone()));
        Ok(())
    }
}
