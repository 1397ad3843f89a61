//! Headerless sample files: frames stored back to back.

use std::io::{self, Read, Write};

use sfix_core::{Frame, FrameGeometry};

use super::{Fps, FrameSink, IngestError, VideoSource};

pub struct RawReader<R> {
    reader: R,
    geometry: FrameGeometry,
    fps: Fps,
    frames_read: usize,
}

impl<R: Read> RawReader<R> {
    pub fn new(reader: R, geometry: FrameGeometry, fps: Fps) -> Self {
        Self {
            reader,
            geometry,
            fps,
            frames_read: 0,
        }
    }
}

impl<R: Read> VideoSource for RawReader<R> {
    fn geometry(&self) -> FrameGeometry {
        self.geometry
    }

    fn fps(&self) -> Fps {
        self.fps
    }

    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError> {
        let expected = self.geometry.sample_len();
        let mut samples = Vec::with_capacity(expected);
        (&mut self.reader)
            .take(expected as u64)
            .read_to_end(&mut samples)?;
        match samples.len() {
            0 => Ok(None),
            n if n == expected => {
                self.frames_read += 1;
                Ok(Some(Frame::new(self.geometry, samples)?))
            }
            actual => Err(IngestError::TruncatedFrame {
                frame: self.frames_read,
                expected,
                actual,
            }),
        }
    }
}

pub struct RawSink<W> {
    out: W,
}

impl<W: Write> RawSink<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }
}

impl<W: Write> FrameSink for RawSink<W> {
    fn begin(&mut self, _geometry: FrameGeometry, _fps: Fps) -> io::Result<()> {
        Ok(())
    }

    fn frame(&mut self, _frame_no: u32, frame: &Frame) -> io::Result<()> {
        self.out.write_all(frame.samples())
    }

    fn finish(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_whole_frames_and_flags_partial_tail() {
        let g = FrameGeometry::new(2, 2, 3).unwrap();
        let data: Vec<u8> = (0..30).collect();
        let mut r = RawReader::new(data.as_slice(), g, Fps { num: 10, den: 1 });
        assert_eq!(r.next_frame().unwrap().unwrap().samples(), &data[..12]);
        assert_eq!(r.next_frame().unwrap().unwrap().samples(), &data[12..24]);
        assert!(matches!(
            r.next_frame(),
            Err(IngestError::TruncatedFrame {
                frame: 2,
                expected: 12,
                actual: 6
            })
        ));
    }
}
