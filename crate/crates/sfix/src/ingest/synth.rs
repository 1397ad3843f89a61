//! Seeded low-motion test video.
//!
//! Frame 0 is noise. Every later frame copies its predecessor and repaints a
//! few square blocks, either with one constant value or with fresh noise.
//! The number of blocks per frame is capped so that the repainted area never
//! exceeds `change_fraction` of the frame.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfix_core::{Frame, FrameGeometry, PlaneLayout};

use super::{Fps, IngestError, VideoSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FillMode {
    /// Each block gets a single value that differs from every sample it covers.
    #[default]
    Constant,
    /// Each sample of each block gets an independent random value.
    Noise,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub geometry: FrameGeometry,
    pub fps: Fps,
    pub seed: u64,
    pub n_frames: u32,
    pub block_count: u32,
    /// Side of each square block, in pixels.
    pub block_size: u32,
    pub fill_mode: FillMode,
    pub change_fraction: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            geometry: FrameGeometry::new(64, 64, 1).expect("static geometry"),
            fps: Fps { num: 25, den: 1 },
            seed: 0,
            n_frames: 100,
            block_count: 8,
            block_size: 8,
            fill_mode: FillMode::Constant,
            change_fraction: 0.05,
        }
    }
}

impl SynthParams {
    fn block_dims(&self) -> (u32, u32) {
        (
            self.block_size.min(self.geometry.width()),
            self.block_size.min(self.geometry.height()),
        )
    }

    /// Blocks actually painted per frame after applying the area budget.
    pub fn blocks_per_frame(&self) -> u32 {
        let (bw, bh) = self.block_dims();
        let pixels = f64::from(self.geometry.width()) * f64::from(self.geometry.height());
        let budget = (self.change_fraction * pixels / (f64::from(bw) * f64::from(bh))).floor();
        self.block_count.min(budget as u32)
    }

    fn validate(&self) -> Result<(), IngestError> {
        let bad = |m: &str| Err(IngestError::BadParams(m.to_string()));
        if self.geometry.layout() != PlaneLayout::Packed {
            return bad("generator only produces packed frames");
        }
        if !(self.change_fraction > 0.0 && self.change_fraction < 1.0) {
            return bad("change_fraction must lie in (0, 1)");
        }
        if self.block_size == 0 {
            return bad("block_size must be positive");
        }
        if self.block_count > 0 && self.blocks_per_frame() == 0 {
            return bad("a single block exceeds the change_fraction budget");
        }
        Ok(())
    }
}

pub struct SyntheticSource {
    params: SynthParams,
    rng: ChaCha8Rng,
    previous: Option<Frame>,
    produced: u32,
}

pub fn gen_low_motion(params: SynthParams) -> Result<SyntheticSource, IngestError> {
    params.validate()?;
    Ok(SyntheticSource {
        params,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        previous: None,
        produced: 0,
    })
}

impl SyntheticSource {
    fn mutate(&mut self, previous: &Frame) -> Frame {
        let g = self.params.geometry;
        let (w, h, c) = (
            g.width() as usize,
            g.height() as usize,
            g.channels() as usize,
        );
        let (bw, bh) = self.params.block_dims();
        let (bw, bh) = (bw as usize, bh as usize);
        let old = previous.samples();
        let mut samples = old.to_vec();
        for _ in 0..self.params.blocks_per_frame() {
            let x0 = self.rng.random_range(0..=w - bw);
            let y0 = self.rng.random_range(0..=h - bh);
            let rows = (y0..y0 + bh).map(|y| (y * w + x0) * c..(y * w + x0 + bw) * c);
            match self.params.fill_mode {
                FillMode::Constant => {
                    let mut present = [false; 256];
                    for r in rows.clone() {
                        old[r].iter().for_each(|&v| present[v as usize] = true);
                    }
                    let start: u8 = self.rng.random();
                    let value = (0..=255u8)
                        .map(|k| start.wrapping_add(k))
                        .find(|&v| !present[v as usize])
                        .unwrap_or(start);
                    for r in rows {
                        samples[r].fill(value);
                    }
                }
                FillMode::Noise => {
                    for r in rows {
                        self.rng.fill(&mut samples[r]);
                    }
                }
            }
        }
        Frame::new(g, samples).expect("same length as predecessor")
    }
}

impl VideoSource for SyntheticSource {
    fn geometry(&self) -> FrameGeometry {
        self.params.geometry
    }

    fn fps(&self) -> Fps {
        self.params.fps
    }

    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError> {
        if self.produced >= self.params.n_frames {
            return Ok(None);
        }
        let frame = match self.previous.take() {
            None => {
                let mut samples = vec![0u8; self.params.geometry.sample_len()];
                self.rng.fill(samples.as_mut_slice());
                Frame::new(self.params.geometry, samples)?
            }
            Some(prev) => self.mutate(&prev),
        };
        self.previous = Some(frame.clone());
        self.produced += 1;
        Ok(Some(frame))
    }
}
