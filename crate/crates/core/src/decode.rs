use alloc::vec::Vec;

use crate::delta::{validate_delta, FrameDelta, IndexCode};
use crate::error::DecodeError;
use crate::frame::Frame;

/// Rebuilds the new frame from `reference` and `delta`.
///
/// The delta is validated first; nothing is reconstructed from a delta that
/// fails validation.
pub fn decode_delta(reference: &Frame, delta: &FrameDelta) -> Result<Frame, DecodeError> {
    validate_delta(delta, &reference.geometry())?;
    if delta.is_equal_frames() {
        return Ok(reference.clone());
    }
    let samples = replay(reference.samples(), delta, delta.index().len())?;
    Ok(Frame::new(reference.geometry(), samples).expect("validated delta covers the frame"))
}

/// Output produced by the first `entries` index entries; a diagnostic replay
/// of the reconstruction one instruction at a time.
pub fn decode_prefix(
    reference: &Frame,
    delta: &FrameDelta,
    entries: usize,
) -> Result<Vec<u8>, DecodeError> {
    if entries > delta.index().len() {
        return Err(DecodeError::PrefixOutOfRange {
            requested: entries,
            available: delta.index().len(),
        });
    }
    validate_delta(delta, &reference.geometry())?;
    if delta.is_equal_frames() {
        return Ok(if entries == 0 {
            Vec::new()
        } else {
            reference.samples().to_vec()
        });
    }
    replay(reference.samples(), delta, entries)
}

fn replay(reference: &[u8], delta: &FrameDelta, entries: usize) -> Result<Vec<u8>, DecodeError> {
    let diff = delta.diff();
    let mut out = Vec::with_capacity(reference.len());
    let mut diff_cursor = 0usize;
    for (position, entry) in delta.index()[..entries].iter().enumerate() {
        let count = entry.count as usize;
        let cursor = out.len();
        if cursor + count > reference.len() {
            return Err(DecodeError::CursorOverrun { position });
        }
        match entry.code {
            IndexCode::CopyFromRef => out.extend_from_slice(&reference[cursor..cursor + count]),
            IndexCode::CopyFromDiff => {
                let chunk = diff
                    .get(diff_cursor..diff_cursor + count)
                    .ok_or(DecodeError::DiffExhausted { position })?;
                out.extend_from_slice(chunk);
                diff_cursor += count;
            }
            IndexCode::RepeatFromDiff => {
                let &value = diff
                    .get(diff_cursor)
                    .ok_or(DecodeError::DiffExhausted { position })?;
                out.resize(cursor + count, value);
                diff_cursor += 1;
            }
            IndexCode::EqualFrames => out.extend_from_slice(reference),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::IndexEntry;
    use crate::error::ValidationError;
    use crate::frame::FrameGeometry;
    use alloc::vec;

    fn frame(samples: Vec<u8>) -> Frame {
        let g = FrameGeometry::new(samples.len() as u32, 1, 1).unwrap();
        Frame::new(g, samples).unwrap()
    }

    #[test]
    fn equal_frames_returns_reference() {
        let f = frame(vec![4, 8, 15, 16, 23, 42]);
        assert_eq!(decode_delta(&f, &FrameDelta::equal_frames()).unwrap(), f);
        assert!(decode_prefix(&f, &FrameDelta::equal_frames(), 0)
            .unwrap()
            .is_empty());
        assert_eq!(
            decode_prefix(&f, &FrameDelta::equal_frames(), 1).unwrap(),
            f.samples()
        );
    }

    #[test]
    fn mixed_entries() {
        let r = frame(vec![1, 2, 3, 4, 5, 6, 7, 8]);
        let d = FrameDelta::from_parts(
            vec![
                IndexEntry::copy_from_ref(2),
                IndexEntry::repeat_from_diff(3),
                IndexEntry::copy_from_diff(2),
                IndexEntry::copy_from_ref(1),
            ],
            vec![9, 10, 11],
        );
        assert_eq!(
            decode_delta(&r, &d).unwrap().samples(),
            &[1, 2, 9, 9, 9, 10, 11, 8]
        );
        assert_eq!(decode_prefix(&r, &d, 2).unwrap(), vec![1, 2, 9, 9, 9]);
    }

    #[test]
    fn invalid_delta_produces_nothing() {
        let r = frame(vec![0; 4]);
        let d = FrameDelta::from_parts(vec![IndexEntry::copy_from_diff(4)], vec![1, 2, 3]);
        assert_eq!(
            decode_delta(&r, &d),
            Err(DecodeError::InvalidDelta(ValidationError::DiffMismatch {
                expected: 4,
                actual: 3
            }))
        );
    }

    #[test]
    fn prefix_bounds() {
        let r = frame(vec![0; 4]);
        let d = FrameDelta::from_parts(vec![IndexEntry::copy_from_ref(4)], vec![]);
        assert_eq!(
            decode_prefix(&r, &d, 2),
            Err(DecodeError::PrefixOutOfRange {
                requested: 2,
                available: 1
            })
        );
    }

    #[test]
    fn replay_guards_unvalidated_input() {
        let r = [0u8; 4];
        let overrun = FrameDelta::from_parts(vec![IndexEntry::copy_from_ref(5)], vec![]);
        assert_eq!(
            replay(&r, &overrun, 1),
            Err(DecodeError::CursorOverrun { position: 0 })
        );
        let starved = FrameDelta::from_parts(
            vec![
                IndexEntry::copy_from_ref(3),
                IndexEntry::repeat_from_diff(1),
            ],
            vec![],
        );
        assert_eq!(
            replay(&r, &starved, 2),
            Err(DecodeError::DiffExhausted { position: 1 })
        );
    }
}
