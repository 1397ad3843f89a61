#![allow(dead_code)]

use sfix_core::{Frame, FrameGeometry, IndexEntry};

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
