use alloc::vec::Vec;

use crate::error::FrameError;

/// How samples are arranged in the flat per-frame stream.
///
/// The codec never looks at this beyond computing the sample count; it is
/// carried so that readers and writers can restore the original container
/// layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PlaneLayout {
    /// Row-major, channel-interleaved samples.
    #[default]
    Packed,
    /// A full-resolution luma plane followed by two half-resolution chroma
    /// planes (rounded up), as in YUV 4:2:0.
    Yuv420,
}

/// Dimensions of every frame in a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameGeometry {
    width: u32,
    height: u32,
    channels: u8,
    layout: PlaneLayout,
    total_samples: u32,
}

impl FrameGeometry {
    pub fn new(width: u32, height: u32, channels: u8) -> Result<Self, FrameError> {
        Self::with_layout(width, height, channels, PlaneLayout::Packed)
    }

    pub fn yuv420(width: u32, height: u32) -> Result<Self, FrameError> {
        Self::with_layout(width, height, 1, PlaneLayout::Yuv420)
    }

    pub fn with_layout(
        width: u32,
        height: u32,
        channels: u8,
        layout: PlaneLayout,
    ) -> Result<Self, FrameError> {
        if width == 0 || height == 0 {
            return Err(FrameError::ZeroDimension { width, height });
        }
        if channels != 1 && channels != 3 {
            return Err(FrameError::BadChannels(channels));
        }
        let (w, h) = (u64::from(width), u64::from(height));
        let total = match layout {
            PlaneLayout::Packed => w * h * u64::from(channels),
            PlaneLayout::Yuv420 => {
                if channels != 1 {
                    return Err(FrameError::LayoutChannels);
                }
                w * h + 2 * w.div_ceil(2) * h.div_ceil(2)
            }
        };
        let total_samples = u32::try_from(total).map_err(|_| FrameError::TooManySamples)?;
        Ok(Self {
            width,
            height,
            channels,
            layout,
            total_samples,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn layout(&self) -> PlaneLayout {
        self.layout
    }

    /// Number of 8-bit samples in one frame.
    pub fn total_samples(&self) -> u32 {
        self.total_samples
    }

    pub fn sample_len(&self) -> usize {
        self.total_samples as usize
    }
}

/// One picture: a flat stream of 8-bit samples matching its geometry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    geometry: FrameGeometry,
    samples: Vec<u8>,
}

impl Frame {
    pub fn new(geometry: FrameGeometry, samples: Vec<u8>) -> Result<Self, FrameError> {
        if samples.len() != geometry.sample_len() {
            return Err(FrameError::LengthMismatch {
                expected: geometry.sample_len(),
                actual: samples.len(),
            });
        }
        Ok(Self { geometry, samples })
    }

    /// A frame with every sample set to `value`.
    pub fn filled(geometry: FrameGeometry, value: u8) -> Self {
        Self {
            geometry,
            samples: alloc::vec![value; geometry.sample_len()],
        }
    }

    pub fn geometry(&self) -> FrameGeometry {
        self.geometry
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }
}

impl AsRef<[u8]> for Frame {
    fn as_ref(&self) -> &[u8] {
        &self.samples
    }
}
