#![allow(dead_code)]

use std::path::Path;

use sfix::ingest::{write_y4m, Fps};
use sfix::sfix_core::{Frame, FrameDelta, FrameGeometry, IndexCode, IndexEntry};

/// 10x7 single-channel reference grid, printed row by row.
pub const REFERENCE: [u8; 70] = [
    156, 159, 158, 154, 151, 152, 156, 154, 152, 156, //
    156, 162, 158, 159, 161, 149, 149, 141, 153, 154, //
    156, 157, 158, 157, 155, 154, 159, 157, 155, 154, //
    152, 152, 152, 153, 154, 151, 156, 151, 153, 154, //
    152, 151, 150, 153, 157, 151, 159, 158, 159, 154, //
    155, 154, 152, 150, 149, 149, 149, 149, 151, 154, //
    156, 159, 158, 159, 157, 154, 146, 148, 147, 150,
];

/// Second grid as printed. Sample 22 reads 155 there, but the published
/// index buffer copies it from the reference (158), so the consistent frame
/// is [`second_frame`].
pub const SECOND_AS_PRINTED: [u8; 70] = [
    156, 159, 158, 154, 155, 155, 155, 155, 152, 156, //
    156, 162, 157, 157, 157, 157, 158, 159, 158, 156, //
    155, 158, 155, 157, 155, 154, 159, 153, 152, 156, //
    156, 156, 156, 156, 158, 159, 154, 152, 150, 150, //
    150, 151, 150, 153, 157, 151, 159, 158, 159, 154, //
    155, 154, 152, 150, 149, 149, 149, 149, 151, 154, //
    156, 159, 158, 159, 157, 154, 146, 148, 147, 150,
];

/// Position whose printed value disagrees with the index buffer.
pub const AMENDED_POSITION: usize = 22;

pub fn second_samples() -> [u8; 70] {
    let mut s = SECOND_AS_PRINTED;
    s[AMENDED_POSITION] = REFERENCE[AMENDED_POSITION];
    s
}

pub fn geometry() -> FrameGeometry {
    FrameGeometry::new(10, 7, 1).unwrap()
}

pub fn reference_frame() -> Frame {
    Frame::new(geometry(), REFERENCE.to_vec()).unwrap()
}

pub fn second_frame() -> Frame {
    Frame::new(geometry(), second_samples().to_vec()).unwrap()
}

pub const GOLDEN_INDEX: [(i8, u32); 11] = [
    (-3, 4),
    (-5, 4),
    (-3, 4),
    (-5, 4),
    (-2, 6),
    (-3, 5),
    (-2, 2),
    (-5, 5),
    (-2, 4),
    (-5, 3),
    (-3, 29),
];

pub const GOLDEN_DIFF: [u8; 16] = [
    155, 157, 158, 159, //
    158, 156, 155, 158, //
    153, 152, 156, 158, //
    159, 154, 152, 150,
];

pub fn golden_index() -> Vec<IndexEntry> {
    GOLDEN_INDEX.iter().copied().map(IndexEntry::from).collect()
}

/// Sample count after each index entry of the golden buffers.
pub const PREFIX_LENGTHS: [usize; 11] = [4, 8, 12, 16, 22, 27, 29, 34, 38, 41, 70];

/// Reconstruction after each index entry as printed in the walkthrough,
/// with sample 22 amended from entry 6 on and sample 58 restored to 151 in
/// the final state.
pub fn walkthrough_states() -> Vec<Vec<u8>> {
    let mut last = SECOND_AS_PRINTED;
    last[58] = 159;
    let mut states: Vec<Vec<u8>> = PREFIX_LENGTHS.iter().map(|&n| last[..n].to_vec()).collect();
    for s in states.iter_mut().skip(5) {
        s[AMENDED_POSITION] = REFERENCE[AMENDED_POSITION];
    }
    states[10][58] = 151;
    states
}

/// Reference then second frame as a mono Y4M file at 25 fps.
pub fn write_golden_y4m(path: &Path) {
    let file = std::fs::File::create(path).unwrap();
    let frames = [reference_frame(), second_frame()];
    write_y4m(file, geometry(), Fps { num: 25, den: 1 }, frames.iter()).unwrap();
}

/// One sample at a time, independent of the library decoder.
pub fn naive_decode(reference: &[u8], delta: &FrameDelta) -> Vec<u8> {
    if delta.index() == [IndexEntry::EQUAL_FRAMES] {
        return reference.to_vec();
    }
    let mut out = Vec::new();
    let mut d = 0;
    for e in delta.index() {
        for k in 0..e.count {
            let v = match e.code {
                IndexCode::CopyFromRef => reference[out.len()],
                IndexCode::CopyFromDiff => {
                    d += 1;
                    delta.diff()[d - 1]
                }
                IndexCode::RepeatFromDiff => {
                    if k == 0 {
                        d += 1;
                    }
                    delta.diff()[d - 1]
                }
                IndexCode::EqualFrames => unreachable!("lone entry handled above"),
            };
            out.push(v);
        }
    }
    assert_eq!(d, delta.diff().len(), "unconsumed difference samples");
    out
}

pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Frames of uniformly random samples; nothing compresses or repeats.
pub fn noise_frames(g: FrameGeometry, n: usize, seed: u64) -> Vec<Frame> {
    let mut rng = XorShift(seed | 1);
    (0..n)
        .map(|_| Frame::new(g, (0..g.sample_len()).map(|_| rng.next() as u8).collect()).unwrap())
        .collect()
}

/// A reference frame plus a mutated copy. Styles: 0 sparse noise, 1 constant
/// blocks, 2 noise blocks, 3 fully random, 4 identical.
pub fn make_pair(w: u32, h: u32, c: u8, seed: u64, style: u8) -> (Frame, Frame) {
    let g = FrameGeometry::new(w, h, c).unwrap();
    let mut rng = XorShift(seed | 1);
    let reference: Vec<u8> = (0..g.sample_len())
        .map(|_| rng.below(4) as u8 * 60)
        .collect();
    let mut new = reference.clone();
    let n = new.len() as u64;
    let row = w as usize * c as usize;
    match style {
        0 => {
            for _ in 0..(n / 10).max(1) {
                let i = rng.below(n) as usize;
                new[i] = rng.next() as u8;
            }
        }
        1 | 2 => {
            for _ in 0..3 {
                let bw = 1 + rng.below(8) as usize;
                let bh = 1 + rng.below(8) as usize;
                let x0 = rng.below(u64::from(w)) as usize;
                let y0 = rng.below(u64::from(h)) as usize;
                let fill = rng.next() as u8;
                for y in y0..(y0 + bh).min(h as usize) {
                    for x in x0..(x0 + bw).min(w as usize) {
                        for ch in 0..c as usize {
                            new[y * row + x * c as usize + ch] =
                                if style == 1 { fill } else { rng.next() as u8 };
                        }
                    }
                }
            }
        }
        3 => new.iter_mut().for_each(|s| *s = rng.next() as u8),
        _ => {}
    }
    (
        Frame::new(g, reference).unwrap(),
        Frame::new(g, new).unwrap(),
    )
}
