//! YUV4MPEG2 streams.
//!
//! Only 8-bit `Cmono` and the `C420` family are understood. 4:2:0 frames
//! keep their three planes back to back as one flat sample stream.

use std::io::{self, BufRead, BufReader, Read, Write};

use sfix_core::{Frame, FrameGeometry, PlaneLayout};

use super::{Fps, FrameSink, IngestError, VideoSource};

const SIGNATURE: &str = "YUV4MPEG2";
const MAX_HEADER_LEN: usize = 4096;

pub struct Y4mReader<R> {
    reader: BufReader<R>,
    geometry: FrameGeometry,
    fps: Fps,
    frames_read: usize,
}

/// Parses the stream header; frames are then pulled through [`VideoSource`].
pub fn read_y4m<R: Read>(reader: R) -> Result<Y4mReader<R>, IngestError> {
    Y4mReader::new(reader)
}

impl<R: Read> Y4mReader<R> {
    pub fn new(reader: R) -> Result<Self, IngestError> {
        let mut reader = BufReader::new(reader);
        let mut line = Vec::new();
        (&mut reader)
            .take(MAX_HEADER_LEN as u64)
            .read_until(b'\n', &mut line)?;
        if !line.starts_with(SIGNATURE.as_bytes()) {
            return Err(IngestError::BadSignature);
        }
        if line.pop() != Some(b'\n') {
            return Err(IngestError::BadHeader("unterminated header line".into()));
        }
        let line = String::from_utf8(line)
            .map_err(|_| IngestError::BadHeader("header is not UTF-8".into()))?;
        let mut tokens = line.split(' ').filter(|t| !t.is_empty());
        if tokens.next() != Some(SIGNATURE) {
            return Err(IngestError::BadSignature);
        }

        let (mut width, mut height, mut fps) = (None, None, None);
        let mut colorspace = String::from("420jpeg");
        for tok in tokens {
            let (tag, value) = tok.split_at(1);
            match tag {
                "W" => width = Some(parse_dim(value, "width")?),
                "H" => height = Some(parse_dim(value, "height")?),
                "F" => {
                    fps = Some(
                        value
                            .replace(':', "/")
                            .parse::<Fps>()
                            .map_err(IngestError::BadHeader)?,
                    )
                }
                "C" => colorspace = value.to_string(),
                // interlacing, aspect ratio and extensions do not affect sample layout
                _ => {}
            }
        }
        let width = width.ok_or_else(|| IngestError::BadHeader("missing W".into()))?;
        let height = height.ok_or_else(|| IngestError::BadHeader("missing H".into()))?;
        let fps = fps.ok_or_else(|| IngestError::BadHeader("missing F".into()))?;
        let geometry = match colorspace.as_str() {
            "mono" => FrameGeometry::new(width, height, 1)?,
            "420" | "420jpeg" | "420paldv" | "420mpeg2" => FrameGeometry::yuv420(width, height)?,
            other => return Err(IngestError::UnsupportedColorspace(other.to_string())),
        };
        Ok(Self {
            reader,
            geometry,
            fps,
            frames_read: 0,
        })
    }
}

fn parse_dim(value: &str, what: &str) -> Result<u32, IngestError> {
    value
        .parse()
        .map_err(|_| IngestError::BadHeader(format!("bad {what} {value:?}")))
}

/// Reads up to and excluding `\n`. `None` means clean EOF before any byte.
fn read_line<R: BufRead>(reader: &mut R) -> Result<Option<Vec<u8>>, IngestError> {
    let mut line = Vec::new();
    let n = reader
        .by_ref()
        .take(MAX_HEADER_LEN as u64)
        .read_until(b'\n', &mut line)?;
    if n == 0 {
        return Ok(None);
    }
    if line.last() != Some(&b'\n') {
        return Err(IngestError::BadHeader("unterminated header line".into()));
    }
    line.pop();
    Ok(Some(line))
}

impl<R: Read> VideoSource for Y4mReader<R> {
    fn geometry(&self) -> FrameGeometry {
        self.geometry
    }

    fn fps(&self) -> Fps {
        self.fps
    }

    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError> {
        let expected = self.geometry.sample_len();
        let truncated = |frame, actual| IngestError::TruncatedFrame {
            frame,
            expected,
            actual,
        };
        let line = match read_line(&mut self.reader) {
            Ok(Some(line)) => line,
            Ok(None) => return Ok(None),
            Err(IngestError::BadHeader(_)) => return Err(truncated(self.frames_read, 0)),
            Err(e) => return Err(e),
        };
        if !(line == b"FRAME" || line.starts_with(b"FRAME ")) {
            return Err(IngestError::BadHeader(format!(
                "expected FRAME marker before frame {}",
                self.frames_read
            )));
        }
        let mut samples = Vec::with_capacity(expected);
        (&mut self.reader)
            .take(expected as u64)
            .read_to_end(&mut samples)?;
        if samples.len() != expected {
            return Err(truncated(self.frames_read, samples.len()));
        }
        self.frames_read += 1;
        Ok(Some(Frame::new(self.geometry, samples)?))
    }
}

pub struct Y4mWriter<W> {
    out: W,
    geometry: FrameGeometry,
    written: u64,
}

impl<W: Write> Y4mWriter<W> {
    pub fn new(mut out: W, geometry: FrameGeometry, fps: Fps) -> Result<Self, IngestError> {
        let colorspace = match (geometry.layout(), geometry.channels()) {
            (PlaneLayout::Packed, 1) => "mono",
            (PlaneLayout::Yuv420, _) => "420jpeg",
            _ => {
                return Err(IngestError::UnsupportedColorspace(format!(
                    "{}-channel packed",
                    geometry.channels()
                )))
            }
        };
        let header = format!(
            "{SIGNATURE} W{} H{} F{}:{} C{colorspace}\n",
            geometry.width(),
            geometry.height(),
            fps.num,
            fps.den
        );
        out.write_all(header.as_bytes())?;
        Ok(Self {
            out,
            geometry,
            written: header.len() as u64,
        })
    }

    pub fn write_frame(&mut self, frame: &Frame) -> Result<(), IngestError> {
        if frame.geometry() != self.geometry {
            return Err(IngestError::BadParams(
                "frame geometry differs from stream".into(),
            ));
        }
        self.out.write_all(b"FRAME\n")?;
        self.out.write_all(frame.samples())?;
        self.written += 6 + frame.samples().len() as u64;
        Ok(())
    }

    /// Bytes written so far, header included.
    pub fn bytes_written(&self) -> u64 {
        self.written
    }

    pub fn into_inner(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Writes a complete stream and returns its size in bytes.
pub fn write_y4m<'a, W: Write>(
    out: W,
    geometry: FrameGeometry,
    fps: Fps,
    frames: impl IntoIterator<Item = &'a Frame>,
) -> Result<u64, IngestError> {
    let mut writer = Y4mWriter::new(out, geometry, fps)?;
    for f in frames {
        writer.write_frame(f)?;
    }
    let n = writer.bytes_written();
    writer.into_inner()?;
    Ok(n)
}

/// [`FrameSink`] that writes a Y4M stream once the geometry is known.
pub struct Y4mSink<W> {
    out: Option<W>,
    writer: Option<Y4mWriter<W>>,
}

impl<W: Write> Y4mSink<W> {
    pub fn new(out: W) -> Self {
        Self {
            out: Some(out),
            writer: None,
        }
    }
}

impl<W: Write> FrameSink for Y4mSink<W> {
    fn begin(&mut self, geometry: FrameGeometry, fps: Fps) -> io::Result<()> {
        let out = self
            .out
            .take()
            .ok_or_else(|| io::Error::other("sink already started"))?;
        self.writer = Some(Y4mWriter::new(out, geometry, fps).map_err(into_io)?);
        Ok(())
    }

    fn frame(&mut self, _frame_no: u32, frame: &Frame) -> io::Result<()> {
        self.writer
            .as_mut()
            .ok_or_else(|| io::Error::other("frame before stream header"))?
            .write_frame(frame)
            .map_err(into_io)
    }

    fn finish(&mut self) -> io::Result<()> {
        match self.writer.as_mut() {
            Some(w) => w.out.flush(),
            None => Ok(()),
        }
    }
}

fn into_io(e: IngestError) -> io::Error {
    match e {
        IngestError::Io(e) => e,
        other => io::Error::other(other.to_string()),
    }
}
